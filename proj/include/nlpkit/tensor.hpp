#ifndef NLPKIT_TENSOR_HPP_
#define NLPKIT_TENSOR_HPP_

#include <cstddef>
#include <string>
#include <vector>

namespace nlpkit {

// Row-major dense tensor.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape_in);
  Tensor(std::vector<std::size_t> shape_in, std::vector<double> data_in);

  std::size_t numel() const;
  double& at(std::size_t i) { return data[i]; }
  double at(std::size_t i) const { return data[i]; }

  bool same_shape(const Tensor& other) const { return shape == other.shape; }
  std::string shape_string() const;
};

// Flat text dump: one shape header line, then one value per line at 17
// significant digits.
std::string tensor_to_text(const Tensor& t);
Tensor tensor_from_text(const std::string& text);

}  // namespace nlpkit

#endif  // NLPKIT_TENSOR_HPP_
