#include "nlpkit/net.hpp"

#include <cmath>
#include <stdexcept>

#include "nlpkit/kernels.hpp"

namespace nlpkit {

Layer Layer::make_embedding(std::size_t vocab_size, std::size_t embed_dim) {
  Layer l;
  l.kind = LayerKind::kEmbedding;
  l.vocab_size = vocab_size;
  l.embed_dim = embed_dim;
  l.embedding.assign(vocab_size * embed_dim, 0.0);
  return l;
}

Layer Layer::make_conv1d(std::size_t in_channels, std::size_t out_channels,
                         std::size_t kernel_width, std::size_t stride,
                         std::size_t padding) {
  Layer l;
  l.kind = LayerKind::kConv1d;
  l.in_channels = in_channels;
  l.out_channels = out_channels;
  l.kernel_width = kernel_width;
  l.stride = stride;
  l.padding = padding;
  l.kernel.assign(out_channels * in_channels * kernel_width, 0.0);
  l.bias.assign(out_channels, 0.0);
  return l;
}

Layer Layer::make_maxpool1d(std::size_t window, std::size_t stride) {
  Layer l;
  l.kind = LayerKind::kMaxPool1d;
  l.pool_window = window;
  l.pool_stride = stride;
  return l;
}

Layer Layer::make_dense(std::size_t in_features, std::size_t out_features) {
  Layer l;
  l.kind = LayerKind::kDense;
  l.in_features = in_features;
  l.out_features = out_features;
  l.weight.assign(out_features * in_features, 0.0);
  l.bias.assign(out_features, 0.0);
  return l;
}

Layer Layer::make_activation(Activation activation) {
  Layer l;
  l.kind = LayerKind::kActivation;
  l.activation = activation;
  return l;
}

std::vector<std::vector<double>*> Layer::parameters() {
  switch (kind) {
    case LayerKind::kEmbedding:
      return {&embedding};
    case LayerKind::kConv1d:
      return {&kernel, &bias};
    case LayerKind::kDense:
      return {&weight, &bias};
    default:
      return {};
  }
}

std::vector<const std::vector<double>*> Layer::parameters() const {
  switch (kind) {
    case LayerKind::kEmbedding:
      return {&embedding};
    case LayerKind::kConv1d:
      return {&kernel, &bias};
    case LayerKind::kDense:
      return {&weight, &bias};
    default:
      return {};
  }
}

namespace {

std::size_t shape_numel(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

// Output shape of one layer given its input shape; validates consistency.
std::vector<std::size_t> infer_shape(const Layer& layer,
                                     const std::vector<std::size_t>& in,
                                     std::size_t index) {
  auto fail = [&](const std::string& what) -> std::vector<std::size_t> {
    throw std::invalid_argument("layer " + std::to_string(index) + ": " + what);
  };
  switch (layer.kind) {
    case LayerKind::kEmbedding: {
      if (index != 0) return fail("embedding must be the first layer");
      if (in.size() != 1) return fail("embedding expects an id vector");
      return {layer.embed_dim, in[0]};
    }
    case LayerKind::kConv1d: {
      if (in.size() != 2) return fail("conv1d expects [channels x width]");
      if (in[0] != layer.in_channels) return fail("channel count mismatch");
      const std::size_t out_w = conv_output_size(
          in[1], layer.kernel_width, layer.padding, layer.stride);
      return {layer.out_channels, out_w};
    }
    case LayerKind::kMaxPool1d: {
      if (in.size() != 2) return fail("maxpool1d expects [channels x width]");
      if (layer.pool_window == 0 || layer.pool_stride == 0) {
        return fail("pool window/stride must be >= 1");
      }
      if (in[1] < layer.pool_window) return fail("pool window exceeds width");
      return {in[0], (in[1] - layer.pool_window) / layer.pool_stride + 1};
    }
    case LayerKind::kDense: {
      if (shape_numel(in) != layer.in_features) {
        return fail("dense input size mismatch");
      }
      return {layer.out_features};
    }
    case LayerKind::kActivation:
      return in;
  }
  return fail("unknown layer kind");
}

double activate(Activation a, double x) {
  switch (a) {
    case Activation::kSigmoid:
      return 1.0 / (1.0 + std::exp(-x));
    case Activation::kRelu:
      return x > 0.0 ? x : 0.0;
  }
  return x;
}

// Derivative expressed through the activation output.
double activate_grad(Activation a, double y) {
  switch (a) {
    case Activation::kSigmoid:
      return y * (1.0 - y);
    case Activation::kRelu:
      return y > 0.0 ? 1.0 : 0.0;
  }
  return 1.0;
}

}  // namespace

Network::Network(std::vector<std::size_t> input_shape,
                 std::vector<Layer> layers)
    : input_shape_(std::move(input_shape)), layers_(std::move(layers)) {
  if (layers_.empty()) throw std::invalid_argument("empty layer stack");
  std::vector<std::size_t> shape = input_shape_;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    shape = infer_shape(layers_[i], shape, i);
    layer_shapes_.push_back(shape);
  }
  output_shape_ = shape;
}

void Network::init_params(Rng& rng, double init_scale) {
  for (Layer& layer : layers_) {
    if (layer.kind == LayerKind::kEmbedding) {
      for (double& w : layer.embedding) {
        w = rng.uniform(-init_scale, init_scale);
      }
    } else if (layer.kind == LayerKind::kConv1d) {
      for (double& w : layer.kernel) w = rng.uniform(-init_scale, init_scale);
      for (double& b : layer.bias) b = 0.0;
    } else if (layer.kind == LayerKind::kDense) {
      for (double& w : layer.weight) w = rng.uniform(-init_scale, init_scale);
      for (double& b : layer.bias) b = 0.0;
    }
  }
}

ForwardResult forward(const Network& net, const Tensor& input) {
  if (input.shape != net.input_shape()) {
    throw std::invalid_argument("input shape " + input.shape_string() +
                                " does not match network input");
  }
  ForwardResult result;
  result.caches.resize(net.layers().size());
  Tensor current = input;
  for (std::size_t i = 0; i < net.layers().size(); ++i) {
    const Layer& layer = net.layers()[i];
    LayerCache& cache = result.caches[i];
    cache.input = current;
    Tensor out(net.layer_shapes()[i]);
    switch (layer.kind) {
      case LayerKind::kEmbedding: {
        const std::size_t width = current.shape[0];
        for (std::size_t pos = 0; pos < width; ++pos) {
          const double raw = current.data[pos];
          const std::size_t id = static_cast<std::size_t>(raw);
          if (raw < 0.0 || id >= layer.vocab_size) {
            throw std::invalid_argument("embedding id out of range");
          }
          for (std::size_t d = 0; d < layer.embed_dim; ++d) {
            out.data[d * width + pos] = layer.embedding[id * layer.embed_dim + d];
          }
        }
        break;
      }
      case LayerKind::kConv1d: {
        kernels::conv1d_forward(current.data.data(), layer.in_channels,
                                current.shape[1], layer.kernel.data(),
                                layer.bias.data(), layer.out_channels,
                                layer.kernel_width, layer.padding,
                                layer.stride, out.data.data(), out.shape[1]);
        break;
      }
      case LayerKind::kMaxPool1d: {
        cache.argmax.resize(out.numel());
        kernels::maxpool1d_forward(current.data.data(), current.shape[0],
                                   current.shape[1], layer.pool_window,
                                   layer.pool_stride, out.data.data(),
                                   out.shape[1], cache.argmax.data());
        break;
      }
      case LayerKind::kDense: {
        kernels::dense_forward(layer.weight.data(), layer.bias.data(),
                               layer.out_features, layer.in_features,
                               current.data.data(), out.data.data());
        break;
      }
      case LayerKind::kActivation: {
        for (std::size_t j = 0; j < current.numel(); ++j) {
          out.data[j] = activate(layer.activation, current.data[j]);
        }
        break;
      }
    }
    cache.output = out;
    current = std::move(out);
  }
  result.output = current;
  return result;
}

double sse_loss(const Tensor& output, const Tensor& target) {
  if (!output.same_shape(target)) {
    throw std::invalid_argument("output/target shape mismatch");
  }
  double e = 0.0;
  for (std::size_t i = 0; i < output.numel(); ++i) {
    const double diff = target.data[i] - output.data[i];
    e += diff * diff;
  }
  return 0.5 * e;
}

double mean_cost(const std::vector<double>& per_example_losses) {
  if (per_example_losses.empty()) {
    throw std::invalid_argument("empty loss list");
  }
  double sum = 0.0;
  for (double v : per_example_losses) sum += v;
  return sum / static_cast<double>(per_example_losses.size());
}

void Gradients::add_scaled(const Gradients& other, double scale) {
  if (layers.empty()) {
    layers = other.layers;
    for (auto& layer : layers) {
      for (auto& vec : layer) {
        for (double& v : vec) v *= scale;
      }
    }
    return;
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    for (std::size_t p = 0; p < layers[l].size(); ++p) {
      for (std::size_t i = 0; i < layers[l][p].size(); ++i) {
        layers[l][p][i] += scale * other.layers[l][p][i];
      }
    }
  }
}

Gradients backward(const Network& net, const std::vector<LayerCache>& caches,
                   const Tensor& target) {
  if (caches.size() != net.layers().size()) {
    throw std::invalid_argument("stale caches: layer count mismatch");
  }
  const Tensor& output = caches.back().output;
  if (!output.same_shape(target)) {
    throw std::invalid_argument("target shape mismatch");
  }

  Gradients grads;
  grads.layers.resize(net.layers().size());

  // dE/df for E = 1/2 ||d - f||^2.
  Tensor delta = output;
  for (std::size_t i = 0; i < delta.numel(); ++i) {
    delta.data[i] = output.data[i] - target.data[i];
  }

  for (std::size_t li = net.layers().size(); li-- > 0;) {
    const Layer& layer = net.layers()[li];
    const LayerCache& cache = caches[li];
    Tensor d_input(cache.input.shape);
    auto& layer_grads = grads.layers[li];

    switch (layer.kind) {
      case LayerKind::kEmbedding: {
        std::vector<double> d_embed(layer.embedding.size(), 0.0);
        const std::size_t width = cache.input.shape[0];
        for (std::size_t pos = 0; pos < width; ++pos) {
          const std::size_t id =
              static_cast<std::size_t>(cache.input.data[pos]);
          for (std::size_t d = 0; d < layer.embed_dim; ++d) {
            d_embed[id * layer.embed_dim + d] += delta.data[d * width + pos];
          }
        }
        layer_grads.push_back(std::move(d_embed));
        // ids are not differentiated; d_input stays zero.
        break;
      }
      case LayerKind::kConv1d: {
        std::vector<double> d_kernel(layer.kernel.size(), 0.0);
        std::vector<double> d_bias(layer.bias.size(), 0.0);
        kernels::conv1d_backward(
            cache.input.data.data(), layer.in_channels, cache.input.shape[1],
            layer.kernel.data(), layer.out_channels, layer.kernel_width,
            layer.padding, layer.stride, delta.data.data(),
            cache.output.shape[1], d_input.data.data(), d_kernel.data(),
            d_bias.data());
        layer_grads.push_back(std::move(d_kernel));
        layer_grads.push_back(std::move(d_bias));
        break;
      }
      case LayerKind::kMaxPool1d: {
        // Gradient flows only to the cached argmax columns.
        const std::size_t channels = cache.input.shape[0];
        const std::size_t in_w = cache.input.shape[1];
        const std::size_t out_w = cache.output.shape[1];
        for (std::size_t c = 0; c < channels; ++c) {
          for (std::size_t ow = 0; ow < out_w; ++ow) {
            d_input.data[c * in_w + cache.argmax[c * out_w + ow]] +=
                delta.data[c * out_w + ow];
          }
        }
        break;
      }
      case LayerKind::kDense: {
        std::vector<double> d_weight(layer.weight.size(), 0.0);
        std::vector<double> d_bias(layer.bias.size(), 0.0);
        kernels::dense_backward(layer.weight.data(), layer.out_features,
                                layer.in_features, cache.input.data.data(),
                                delta.data.data(), d_input.data.data(),
                                d_weight.data(), d_bias.data());
        layer_grads.push_back(std::move(d_weight));
        layer_grads.push_back(std::move(d_bias));
        break;
      }
      case LayerKind::kActivation: {
        for (std::size_t i = 0; i < delta.numel(); ++i) {
          d_input.data[i] =
              delta.data[i] * activate_grad(layer.activation, cache.output.data[i]);
        }
        break;
      }
    }
    delta = std::move(d_input);
  }
  return grads;
}

void sgd_step(Network& net, const Gradients& grads, double learning_rate) {
  if (grads.layers.size() != net.layers().size()) {
    throw std::invalid_argument("gradient/layer count mismatch");
  }
  for (std::size_t li = 0; li < net.layers().size(); ++li) {
    auto params = net.mutable_layers()[li].parameters();
    if (params.size() != grads.layers[li].size()) {
      throw std::invalid_argument("gradient/parameter shape mismatch");
    }
    for (std::size_t p = 0; p < params.size(); ++p) {
      const auto& g = grads.layers[li][p];
      auto& w = *params[p];
      if (g.size() != w.size()) {
        throw std::invalid_argument("gradient size mismatch");
      }
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (!std::isfinite(g[i])) {
          throw std::runtime_error("non-finite gradient in layer " +
                                   std::to_string(li));
        }
        w[i] -= learning_rate * g[i];
      }
    }
  }
}

double gradient_check(Network& net, const Tensor& input, const Tensor& target,
                      double epsilon) {
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  const ForwardResult fwd = forward(net, input);
  const Gradients analytic = backward(net, fwd.caches, target);

  double max_rel = 0.0;
  for (std::size_t li = 0; li < net.layers().size(); ++li) {
    auto params = net.mutable_layers()[li].parameters();
    for (std::size_t p = 0; p < params.size(); ++p) {
      auto& w = *params[p];
      for (std::size_t i = 0; i < w.size(); ++i) {
        const double saved = w[i];
        w[i] = saved + epsilon;
        const double plus = sse_loss(forward(net, input).output, target);
        w[i] = saved - epsilon;
        const double minus = sse_loss(forward(net, input).output, target);
        w[i] = saved;
        const double numeric = (plus - minus) / (2.0 * epsilon);
        const double a = analytic.layers[li][p][i];
        const double rel = std::abs(a - numeric) /
                           std::max({std::abs(a), std::abs(numeric), 1e-12});
        max_rel = std::max(max_rel, rel);
      }
    }
  }
  return max_rel;
}

}  // namespace nlpkit
