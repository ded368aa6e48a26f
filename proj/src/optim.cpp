#include "voxplan/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace voxplan {

template <typename T>
OptimizerState<T> make_optimizer_state(OptimizerKind kind, const std::vector<Tensor<T>>& params,
                                       MemTracker* tracker) {
  OptimizerState<T> state;
  state.kind = kind;
  if (kind == OptimizerKind::sgd_momentum || kind == OptimizerKind::adam) {
    for (const Tensor<T>& p : params) state.m1.emplace_back(p.shape(), tracker);
  }
  if (kind == OptimizerKind::adam) {
    for (const Tensor<T>& p : params) state.m2.emplace_back(p.shape(), tracker);
  }
  return state;
}

template <typename T>
void sgd_update(Tensor<T>& param, const Tensor<T>& grad, double learning_rate) {
  require_same_shape(param, grad, "sgd_update");
  const T lr = static_cast<T>(learning_rate);
  T* p = param.data();
  const T* g = grad.data();
  for (std::uint64_t i = 0; i < param.elems(); ++i) p[i] -= lr * g[i];
}

template <typename T>
void adam_update(Tensor<T>& param, const Tensor<T>& grad, Tensor<T>& m1, Tensor<T>& m2,
                 std::int64_t step, const OptimHyper& hyper) {
  require_same_shape(param, grad, "adam_update");
  const T lr = static_cast<T>(hyper.learning_rate);
  const T b1 = static_cast<T>(hyper.beta1);
  const T b2 = static_cast<T>(hyper.beta2);
  const T eps = static_cast<T>(hyper.epsilon);
  const T c1 = T(1) - static_cast<T>(std::pow(hyper.beta1, static_cast<double>(step)));
  const T c2 = T(1) - static_cast<T>(std::pow(hyper.beta2, static_cast<double>(step)));
  T* p = param.data();
  const T* g = grad.data();
  T* m = m1.data();
  T* v = m2.data();
  for (std::uint64_t i = 0; i < param.elems(); ++i) {
    m[i] = b1 * m[i] + (T(1) - b1) * g[i];
    v[i] = b2 * v[i] + (T(1) - b2) * g[i] * g[i];
    const T mhat = m[i] / c1;
    const T vhat = v[i] / c2;
    p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  }
}

template <typename T>
void apply_update(OptimizerState<T>& state, std::vector<Tensor<T>>& params,
                  const std::vector<Tensor<T>>& grads, const OptimHyper& hyper) {
  if (params.size() != grads.size()) {
    throw std::invalid_argument("apply_update: parameter/gradient buffer counts differ");
  }
  switch (state.kind) {
    case OptimizerKind::sgd:
      for (std::size_t i = 0; i < params.size(); ++i) sgd_update(params[i], grads[i], hyper.learning_rate);
      return;
    case OptimizerKind::sgd_momentum: {
      const T mu = static_cast<T>(hyper.momentum);
      const T lr = static_cast<T>(hyper.learning_rate);
      for (std::size_t i = 0; i < params.size(); ++i) {
        T* v = state.m1[i].data();
        T* p = params[i].data();
        const T* g = grads[i].data();
        for (std::uint64_t j = 0; j < params[i].elems(); ++j) {
          v[j] = mu * v[j] + g[j];
          p[j] -= lr * v[j];
        }
      }
      return;
    }
    case OptimizerKind::adam:
      ++state.step;
      for (std::size_t i = 0; i < params.size(); ++i) {
        adam_update(params[i], grads[i], state.m1[i], state.m2[i], state.step, hyper);
      }
      return;
  }
  throw std::logic_error("unhandled optimizer kind");
}

#define VOXPLAN_INSTANTIATE(T)                                                                 \
  template OptimizerState<T> make_optimizer_state<T>(OptimizerKind, const std::vector<Tensor<T>>&, \
                                                     MemTracker*);                             \
  template void sgd_update<T>(Tensor<T>&, const Tensor<T>&, double);                           \
  template void adam_update<T>(Tensor<T>&, const Tensor<T>&, Tensor<T>&, Tensor<T>&,           \
                               std::int64_t, const OptimHyper&);                               \
  template void apply_update<T>(OptimizerState<T>&, std::vector<Tensor<T>>&,                   \
                                const std::vector<Tensor<T>>&, const OptimHyper&);

VOXPLAN_INSTANTIATE(float)
VOXPLAN_INSTANTIATE(double)

#undef VOXPLAN_INSTANTIATE

}  // namespace voxplan
