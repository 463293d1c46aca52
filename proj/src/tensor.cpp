#include "nlpkit/tensor.hpp"

#include <sstream>
#include <stdexcept>

namespace nlpkit {

namespace {

std::size_t shape_product(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) {
    if (d == 0) throw std::invalid_argument("zero-sized dimension");
    n *= d;
  }
  return n;
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape_in)
    : shape(std::move(shape_in)), data(shape_product(shape), 0.0) {}

Tensor::Tensor(std::vector<std::size_t> shape_in, std::vector<double> data_in)
    : shape(std::move(shape_in)), data(std::move(data_in)) {
  if (data.size() != shape_product(shape)) {
    throw std::invalid_argument("data size does not match shape");
  }
}

std::size_t Tensor::numel() const { return data.size(); }

std::string Tensor::shape_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) s += ", ";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

std::string tensor_to_text(const Tensor& t) {
  std::ostringstream os;
  os << "shape";
  for (std::size_t d : t.shape) os << ' ' << d;
  os << '\n';
  os.precision(17);
  for (double v : t.data) os << v << '\n';
  return os.str();
}

Tensor tensor_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string tag;
  in >> tag;
  if (tag != "shape") throw std::runtime_error("missing shape header");
  std::string rest;
  std::getline(in, rest);
  std::istringstream header(rest);
  std::vector<std::size_t> shape;
  std::size_t d = 0;
  while (header >> d) shape.push_back(d);
  Tensor t(shape);
  for (std::size_t i = 0; i < t.numel(); ++i) {
    if (!(in >> t.data[i])) throw std::runtime_error("truncated tensor dump");
  }
  return t;
}

}  // namespace nlpkit
