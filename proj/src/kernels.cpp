#include "nlpkit/kernels.hpp"

#include <cstdint>
#include <stdexcept>

namespace nlpkit {

std::size_t conv_output_size(std::size_t input_width, std::size_t kernel_width,
                             std::size_t padding, std::size_t stride) {
  if (stride == 0) throw std::invalid_argument("stride must be >= 1");
  if (kernel_width == 0) throw std::invalid_argument("kernel width is zero");
  const std::size_t padded = input_width + 2 * padding;
  if (padded < kernel_width) {
    throw std::invalid_argument("kernel larger than padded input");
  }
  return (padded - kernel_width) / stride + 1;
}

namespace kernels {

void conv1d_forward(const double* input, std::size_t in_ch, std::size_t in_w,
                    const double* kernel, const double* bias,
                    std::size_t out_ch, std::size_t k, std::size_t padding,
                    std::size_t stride, double* output, std::size_t out_w) {
  const std::int64_t rows = static_cast<std::int64_t>(out_ch);
#pragma omp parallel for schedule(static)
  for (std::int64_t oc = 0; oc < rows; ++oc) {
    const double* kbase = kernel + static_cast<std::size_t>(oc) * in_ch * k;
    double* obase = output + static_cast<std::size_t>(oc) * out_w;
    for (std::size_t ow = 0; ow < out_w; ++ow) {
      double acc = bias[oc];
      // Input column for tap t is ow*stride + t - padding.
      const std::int64_t base =
          static_cast<std::int64_t>(ow * stride) - static_cast<std::int64_t>(padding);
      for (std::size_t ic = 0; ic < in_ch; ++ic) {
        const double* irow = input + ic * in_w;
        const double* krow = kbase + ic * k;
        for (std::size_t t = 0; t < k; ++t) {
          const std::int64_t col = base + static_cast<std::int64_t>(t);
          if (col < 0 || col >= static_cast<std::int64_t>(in_w)) continue;
          acc += krow[t] * irow[col];
        }
      }
      obase[ow] = acc;
    }
  }
}

void conv1d_backward(const double* input, std::size_t in_ch, std::size_t in_w,
                     const double* kernel, std::size_t out_ch, std::size_t k,
                     std::size_t padding, std::size_t stride,
                     const double* d_output, std::size_t out_w,
                     double* d_input, double* d_kernel, double* d_bias) {
  // Bias and kernel gradients: one thread owns one output channel.
  const std::int64_t rows = static_cast<std::int64_t>(out_ch);
#pragma omp parallel for schedule(static)
  for (std::int64_t oc = 0; oc < rows; ++oc) {
    const double* drow = d_output + static_cast<std::size_t>(oc) * out_w;
    double acc = 0.0;
    for (std::size_t ow = 0; ow < out_w; ++ow) acc += drow[ow];
    d_bias[oc] = acc;

    double* kgrad = d_kernel + static_cast<std::size_t>(oc) * in_ch * k;
    for (std::size_t ic = 0; ic < in_ch; ++ic) {
      const double* irow = input + ic * in_w;
      for (std::size_t t = 0; t < k; ++t) {
        double g = 0.0;
        for (std::size_t ow = 0; ow < out_w; ++ow) {
          const std::int64_t col = static_cast<std::int64_t>(ow * stride + t) -
                                   static_cast<std::int64_t>(padding);
          if (col < 0 || col >= static_cast<std::int64_t>(in_w)) continue;
          g += drow[ow] * irow[col];
        }
        kgrad[ic * k + t] = g;
      }
    }
  }

  // Input gradient: gather over the taps that touch each input column.
  const std::int64_t cols = static_cast<std::int64_t>(in_ch * in_w);
#pragma omp parallel for schedule(static)
  for (std::int64_t flat = 0; flat < cols; ++flat) {
    const std::size_t ic = static_cast<std::size_t>(flat) / in_w;
    const std::size_t iw = static_cast<std::size_t>(flat) % in_w;
    double g = 0.0;
    for (std::size_t oc = 0; oc < out_ch; ++oc) {
      const double* drow = d_output + oc * out_w;
      const double* krow = kernel + (oc * in_ch + ic) * k;
      for (std::size_t t = 0; t < k; ++t) {
        // iw = ow*stride + t - padding  =>  ow = (iw + padding - t)/stride
        const std::int64_t num = static_cast<std::int64_t>(iw + padding) -
                                 static_cast<std::int64_t>(t);
        if (num < 0) continue;
        if (num % static_cast<std::int64_t>(stride) != 0) continue;
        const std::size_t ow = static_cast<std::size_t>(num) / stride;
        if (ow >= out_w) continue;
        g += drow[ow] * krow[t];
      }
    }
    d_input[flat] = g;
  }
}

void dense_forward(const double* weight, const double* bias, std::size_t out_n,
                   std::size_t in_n, const double* x, double* y) {
  const std::int64_t rows = static_cast<std::int64_t>(out_n);
#pragma omp parallel for schedule(static)
  for (std::int64_t o = 0; o < rows; ++o) {
    const double* wrow = weight + static_cast<std::size_t>(o) * in_n;
    double acc = bias[o];
    for (std::size_t i = 0; i < in_n; ++i) acc += wrow[i] * x[i];
    y[o] = acc;
  }
}

void dense_backward(const double* weight, std::size_t out_n, std::size_t in_n,
                    const double* x, const double* d_y, double* d_x,
                    double* d_weight, double* d_bias) {
  const std::int64_t in_rows = static_cast<std::int64_t>(in_n);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < in_rows; ++i) {
    double acc = 0.0;
    for (std::size_t o = 0; o < out_n; ++o) {
      acc += weight[o * in_n + static_cast<std::size_t>(i)] * d_y[o];
    }
    d_x[i] = acc;
  }
  const std::int64_t out_rows = static_cast<std::int64_t>(out_n);
#pragma omp parallel for schedule(static)
  for (std::int64_t o = 0; o < out_rows; ++o) {
    double* wrow = d_weight + static_cast<std::size_t>(o) * in_n;
    const double g = d_y[o];
    for (std::size_t i = 0; i < in_n; ++i) wrow[i] = g * x[i];
    d_bias[o] = g;
  }
}

void maxpool1d_forward(const double* input, std::size_t channels,
                       std::size_t in_w, std::size_t window,
                       std::size_t stride, double* output, std::size_t out_w,
                       std::size_t* argmax) {
  const std::int64_t rows = static_cast<std::int64_t>(channels);
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < rows; ++c) {
    const double* irow = input + static_cast<std::size_t>(c) * in_w;
    for (std::size_t ow = 0; ow < out_w; ++ow) {
      const std::size_t start = ow * stride;
      std::size_t best = start;
      for (std::size_t j = start + 1; j < start + window; ++j) {
        if (irow[j] > irow[best]) best = j;  // ties keep the lowest index
      }
      output[static_cast<std::size_t>(c) * out_w + ow] = irow[best];
      argmax[static_cast<std::size_t>(c) * out_w + ow] = best;
    }
  }
}

}  // namespace kernels

namespace refkernels {

void conv1d_forward(const double* input, std::size_t in_ch, std::size_t in_w,
                    const double* kernel, const double* bias,
                    std::size_t out_ch, std::size_t k, std::size_t padding,
                    std::size_t stride, double* output, std::size_t out_w) {
  for (std::size_t oc = 0; oc < out_ch; ++oc) {
    for (std::size_t ow = 0; ow < out_w; ++ow) {
      double acc = bias[oc];
      for (std::size_t ic = 0; ic < in_ch; ++ic) {
        for (std::size_t t = 0; t < k; ++t) {
          const std::int64_t col = static_cast<std::int64_t>(ow * stride + t) -
                                   static_cast<std::int64_t>(padding);
          if (col < 0 || col >= static_cast<std::int64_t>(in_w)) continue;
          acc += kernel[(oc * in_ch + ic) * k + t] *
                 input[ic * in_w + static_cast<std::size_t>(col)];
        }
      }
      output[oc * out_w + ow] = acc;
    }
  }
}

void dense_forward(const double* weight, const double* bias, std::size_t out_n,
                   std::size_t in_n, const double* x, double* y) {
  for (std::size_t o = 0; o < out_n; ++o) {
    double acc = bias[o];
    for (std::size_t i = 0; i < in_n; ++i) acc += weight[o * in_n + i] * x[i];
    y[o] = acc;
  }
}

void maxpool1d_forward(const double* input, std::size_t channels,
                       std::size_t in_w, std::size_t window,
                       std::size_t stride, double* output, std::size_t out_w,
                       std::size_t* argmax) {
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t ow = 0; ow < out_w; ++ow) {
      const std::size_t start = ow * stride;
      std::size_t best = start;
      for (std::size_t j = start + 1; j < start + window; ++j) {
        if (input[c * in_w + j] > input[c * in_w + best]) best = j;
      }
      output[c * out_w + ow] = input[c * in_w + best];
      argmax[c * out_w + ow] = best;
    }
  }
}

}  // namespace refkernels

}  // namespace nlpkit
