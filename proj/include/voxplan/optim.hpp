#pragma once

#include <vector>

#include "voxplan/memplan.hpp"
#include "voxplan/tensor.hpp"

namespace voxplan {

struct OptimHyper {
  double learning_rate = 1e-3;
  double momentum = 0.9;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Per-parameter auxiliary buffers: m1 for momentum/adam, m2 for adam only.
template <typename T>
struct OptimizerState {
  OptimizerKind kind = OptimizerKind::sgd;
  std::int64_t step = 0;
  std::vector<Tensor<T>> m1;
  std::vector<Tensor<T>> m2;
};

template <typename T>
OptimizerState<T> make_optimizer_state(OptimizerKind kind, const std::vector<Tensor<T>>& params,
                                       MemTracker* tracker = nullptr);

/// One update across all parameter buffers. adam applies bias correction.
template <typename T>
void apply_update(OptimizerState<T>& state, std::vector<Tensor<T>>& params,
                  const std::vector<Tensor<T>>& grads, const OptimHyper& hyper);

/// Single-tensor forms of the standard rules.
template <typename T>
void sgd_update(Tensor<T>& param, const Tensor<T>& grad, double learning_rate);

template <typename T>
void adam_update(Tensor<T>& param, const Tensor<T>& grad, Tensor<T>& m1, Tensor<T>& m2,
                 std::int64_t step, const OptimHyper& hyper);

}  // namespace voxplan
