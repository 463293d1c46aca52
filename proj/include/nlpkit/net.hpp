#ifndef NLPKIT_NET_HPP_
#define NLPKIT_NET_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "nlpkit/rng.hpp"
#include "nlpkit/tensor.hpp"

namespace nlpkit {

enum class LayerKind : std::uint8_t {
  kEmbedding,
  kConv1d,
  kMaxPool1d,
  kDense,
  kActivation,
};

enum class Activation : std::uint8_t { kSigmoid, kRelu };

// One network layer. Tagged struct; only the fields of the active kind
// are meaningful. Sequence data is channels-first: [channels x width].
struct Layer {
  LayerKind kind = LayerKind::kDense;

  // embedding: table [vocab_size x embed_dim]; input is a width-long id
  // vector, output [embed_dim x width].
  std::size_t vocab_size = 0;
  std::size_t embed_dim = 0;
  std::vector<double> embedding;

  // conv1d: kernel [out_channels x in_channels x kernel_width].
  std::size_t in_channels = 0;
  std::size_t out_channels = 0;
  std::size_t kernel_width = 0;
  std::size_t stride = 1;
  std::size_t padding = 0;
  std::vector<double> kernel;

  // maxpool1d.
  std::size_t pool_window = 0;
  std::size_t pool_stride = 0;

  // dense: weight [out_features x in_features]; input is flattened.
  std::size_t in_features = 0;
  std::size_t out_features = 0;
  std::vector<double> weight;

  // conv1d and dense share the bias.
  std::vector<double> bias;

  Activation activation = Activation::kSigmoid;

  static Layer make_embedding(std::size_t vocab_size, std::size_t embed_dim);
  static Layer make_conv1d(std::size_t in_channels, std::size_t out_channels,
                           std::size_t kernel_width, std::size_t stride,
                           std::size_t padding);
  static Layer make_maxpool1d(std::size_t window, std::size_t stride);
  static Layer make_dense(std::size_t in_features, std::size_t out_features);
  static Layer make_activation(Activation activation);

  // Mutable views of this layer's parameter vectors (empty for pool and
  // activation layers).
  std::vector<std::vector<double>*> parameters();
  std::vector<const std::vector<double>*> parameters() const;
};

// Ordered layer stack with a declared input shape. Construction validates
// the whole shape chain, including conv output sizing.
class Network {
 public:
  Network() = default;
  Network(std::vector<std::size_t> input_shape, std::vector<Layer> layers);

  const std::vector<Layer>& layers() const { return layers_; }
  std::vector<Layer>& mutable_layers() { return layers_; }
  const std::vector<std::size_t>& input_shape() const { return input_shape_; }
  const std::vector<std::size_t>& output_shape() const { return output_shape_; }
  // Per-layer output shapes, in order.
  const std::vector<std::vector<std::size_t>>& layer_shapes() const {
    return layer_shapes_;
  }

  // Uniform [-init_scale, +init_scale] weights, zero biases.
  void init_params(Rng& rng, double init_scale);

 private:
  std::vector<std::size_t> input_shape_;
  std::vector<Layer> layers_;
  std::vector<std::vector<std::size_t>> layer_shapes_;
  std::vector<std::size_t> output_shape_;
};

// Everything backward needs from one forward pass: per-layer inputs,
// outputs (the pre-activations feeding the next layer) and pool routing.
struct LayerCache {
  Tensor input;
  Tensor output;
  std::vector<std::size_t> argmax;
};

struct ForwardResult {
  Tensor output;
  std::vector<LayerCache> caches;
};

ForwardResult forward(const Network& net, const Tensor& input);

// E = 1/2 * sum (d_j - f_j)^2.
double sse_loss(const Tensor& output, const Tensor& target);

// Arithmetic mean of per-example losses.
double mean_cost(const std::vector<double>& per_example_losses);

// Per-layer parameter gradients, parallel to Layer::parameters().
struct Gradients {
  std::vector<std::vector<std::vector<double>>> layers;

  void add_scaled(const Gradients& other, double scale);
};

// Backpropagation of the SSE loss through the cached forward pass.
// The output delta is output - target; sigmoid layers contribute the
// a(1-a) factor, pool layers route to their argmax entries only.
Gradients backward(const Network& net, const std::vector<LayerCache>& caches,
                   const Tensor& target);

// w <- w - lr * dE/dw for every parameter. Throws on non-finite gradients.
void sgd_step(Network& net, const Gradients& grads, double learning_rate);

// Max over parameters of |analytic - numeric| / max(|analytic|, |numeric|,
// 1e-12), numeric by central differences of sse_loss.
double gradient_check(Network& net, const Tensor& input, const Tensor& target,
                      double epsilon);

struct TrainConfig {
  double learning_rate = 0.5;
  std::size_t epochs = 20;
  std::uint64_t seed = 1;
  double init_scale = 0.1;
};

}  // namespace nlpkit

#endif  // NLPKIT_NET_HPP_
