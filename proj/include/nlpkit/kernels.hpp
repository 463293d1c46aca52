#ifndef NLPKIT_KERNELS_HPP_
#define NLPKIT_KERNELS_HPP_

#include <cstddef>
#include <vector>

namespace nlpkit {

// Output width of a 1-D convolution: floor((W + 2p - k)/s) + 1.
// Throws when the kernel does not fit the padded input.
std::size_t conv_output_size(std::size_t input_width, std::size_t kernel_width,
                             std::size_t padding, std::size_t stride);

// Hot inner loops, OpenMP-parallel. All kernels are gather-style: each
// output element is produced by exactly one thread with a fixed summation
// order, so results are bit-identical for any thread count.
namespace kernels {

// input [in_ch x in_w], kernel [out_ch x in_ch x k], bias [out_ch],
// zero padding. Output [out_ch x out_w].
void conv1d_forward(const double* input, std::size_t in_ch, std::size_t in_w,
                    const double* kernel, const double* bias,
                    std::size_t out_ch, std::size_t k, std::size_t padding,
                    std::size_t stride, double* output, std::size_t out_w);

// d_output [out_ch x out_w] -> d_input [in_ch x in_w],
// d_kernel [out_ch x in_ch x k], d_bias [out_ch]. Gradient buffers are
// overwritten, not accumulated.
void conv1d_backward(const double* input, std::size_t in_ch, std::size_t in_w,
                     const double* kernel, std::size_t out_ch, std::size_t k,
                     std::size_t padding, std::size_t stride,
                     const double* d_output, std::size_t out_w,
                     double* d_input, double* d_kernel, double* d_bias);

// y = W x + b with W [out x in].
void dense_forward(const double* weight, const double* bias, std::size_t out_n,
                   std::size_t in_n, const double* x, double* y);

// d_x = W^T d_y, d_W = d_y x^T, d_b = d_y.
void dense_backward(const double* weight, std::size_t out_n, std::size_t in_n,
                    const double* x, const double* d_y, double* d_x,
                    double* d_weight, double* d_bias);

// Window max per channel; argmax records the input column index feeding
// each output element (ties toward the lowest index).
void maxpool1d_forward(const double* input, std::size_t channels,
                       std::size_t in_w, std::size_t window,
                       std::size_t stride, double* output, std::size_t out_w,
                       std::size_t* argmax);

}  // namespace kernels

// Serial reference implementations: independent nested-loop versions used
// as test oracles and as the baseline in the kernel benchmark.
namespace refkernels {

void conv1d_forward(const double* input, std::size_t in_ch, std::size_t in_w,
                    const double* kernel, const double* bias,
                    std::size_t out_ch, std::size_t k, std::size_t padding,
                    std::size_t stride, double* output, std::size_t out_w);

void dense_forward(const double* weight, const double* bias, std::size_t out_n,
                   std::size_t in_n, const double* x, double* y);

void maxpool1d_forward(const double* input, std::size_t channels,
                       std::size_t in_w, std::size_t window,
                       std::size_t stride, double* output, std::size_t out_w,
                       std::size_t* argmax);

}  // namespace refkernels

}  // namespace nlpkit

#endif  // NLPKIT_KERNELS_HPP_
