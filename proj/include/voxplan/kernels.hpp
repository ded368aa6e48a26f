#pragma once

#include <utility>
#include <vector>

#include "voxplan/alloc.hpp"
#include "voxplan/tensor.hpp"

namespace voxplan::kernels {

/// When enabled, every kernel scans its outputs and throws on NaN/Inf,
/// naming the kernel. Off by default; training always checks the loss.
void set_nan_checks(bool on);
bool nan_checks_enabled();

template <typename T>
void check_finite(const Tensor<T>& t, const char* kernel);

/// Direct 3D convolution: same padding, stride 1, zero-filled borders.
/// weight shape is (k, k, k, c_in, c_out), bias (c_out) in the last slot.
template <typename T>
Tensor<T> conv3d_forward(const Tensor<T>& input, const Tensor<T>& weight, const Tensor<T>& bias,
                         MemTracker* tracker = nullptr);

template <typename T>
struct ConvGrads {
  Tensor<T> input;
  Tensor<T> weight;
  Tensor<T> bias;
};

template <typename T>
ConvGrads<T> conv3d_backward(const Tensor<T>& grad_out, const Tensor<T>& input,
                             const Tensor<T>& weight, MemTracker* tracker = nullptr);

/// Accumulating form used by the executor: adds into caller-owned buffers.
template <typename T>
void conv3d_backward_acc(const Tensor<T>& grad_out, const Tensor<T>& input, const Tensor<T>& weight,
                         Tensor<T>& grad_input, Tensor<T>& grad_weight, Tensor<T>& grad_bias);

/// 2x2x2 max pooling, stride 2. The index buffer stores, per output
/// element, the flat index of the winning input element; ties go to the
/// lowest linear index.
template <typename T>
std::pair<Tensor<T>, Tensor<index_t<T>>> maxpool3d_forward(const Tensor<T>& input,
                                                           MemTracker* tracker = nullptr);

template <typename T>
Tensor<T> maxpool3d_backward(const Tensor<T>& grad_out, const Tensor<index_t<T>>& argmax,
                             const TensorShape& input_shape, MemTracker* tracker = nullptr);

template <typename T>
void maxpool3d_backward_acc(const Tensor<T>& grad_out, const Tensor<index_t<T>>& argmax,
                            Tensor<T>& grad_input);

/// Nearest-neighbor upsampling by 2; backward sums each 2x2x2 block.
template <typename T>
Tensor<T> upsample3d_forward(const Tensor<T>& input, MemTracker* tracker = nullptr);

template <typename T>
Tensor<T> upsample3d_backward(const Tensor<T>& grad_out, MemTracker* tracker = nullptr);

template <typename T>
void upsample3d_backward_acc(const Tensor<T>& grad_out, Tensor<T>& grad_input);

template <typename T>
Tensor<T> relu_forward(const Tensor<T>& input, MemTracker* tracker = nullptr);

/// Backward uses the retained output: passes gradient where output > 0.
template <typename T>
Tensor<T> relu_backward(const Tensor<T>& grad_out, const Tensor<T>& output,
                        MemTracker* tracker = nullptr);

template <typename T>
void relu_backward_acc(const Tensor<T>& grad_out, const Tensor<T>& output, Tensor<T>& grad_input);

template <typename T>
Tensor<T> sigmoid_forward(const Tensor<T>& input, MemTracker* tracker = nullptr);

template <typename T>
Tensor<T> sigmoid_backward(const Tensor<T>& grad_out, const Tensor<T>& output,
                           MemTracker* tracker = nullptr);

template <typename T>
void sigmoid_backward_acc(const Tensor<T>& grad_out, const Tensor<T>& output,
                          Tensor<T>& grad_input);

/// Channel-axis concatenation; inputs must agree on n, d, h, w.
template <typename T>
Tensor<T> concat_forward(const std::vector<const Tensor<T>*>& inputs, MemTracker* tracker = nullptr);

template <typename T>
std::vector<Tensor<T>> concat_backward(const Tensor<T>& grad_out,
                                       const std::vector<TensorShape>& input_shapes,
                                       MemTracker* tracker = nullptr);

template <typename T>
void concat_backward_acc(const Tensor<T>& grad_out, const std::vector<Tensor<T>*>& grad_inputs);

}  // namespace voxplan::kernels
