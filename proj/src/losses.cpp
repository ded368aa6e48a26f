#include "voxplan/losses.hpp"

#include <cmath>
#include <stdexcept>

namespace voxplan {

LossKind parse_loss(const std::string& name) {
  if (name == "bce") return LossKind::bce;
  if (name == "soft_dice" || name == "dice") return LossKind::soft_dice;
  if (name == "bce_plus_dice") return LossKind::bce_plus_dice;
  throw std::invalid_argument("unknown loss '" + name + "' (expected bce, soft_dice or bce_plus_dice)");
}

const char* loss_name(LossKind kind) {
  switch (kind) {
    case LossKind::bce: return "bce";
    case LossKind::soft_dice: return "soft_dice";
    case LossKind::bce_plus_dice: return "bce_plus_dice";
  }
  return "?";
}

namespace {

template <typename T>
void check_pred_range(const Tensor<T>& pred) {
  const T* p = pred.data();
  for (std::uint64_t i = 0; i < pred.elems(); ++i) {
    if (!(p[i] >= T(0) && p[i] <= T(1))) {
      throw std::invalid_argument("loss input must lie in [0,1], found " + std::to_string(double(p[i])) +
                                  " at flat index " + std::to_string(i));
    }
  }
}

}  // namespace

template <typename T>
double soft_dice_loss(const Tensor<T>& pred, const Tensor<T>& target, double smooth) {
  require_same_shape(pred, target, "soft_dice_loss");
  check_pred_range(pred);
  const T* p = pred.data();
  const T* t = target.data();
  T inter = T(0), psum = T(0), tsum = T(0);
  for (std::uint64_t i = 0; i < pred.elems(); ++i) {
    inter += p[i] * t[i];
    psum += p[i];
    tsum += t[i];
  }
  const T s = static_cast<T>(smooth);
  return 1.0 - double((T(2) * inter + s) / (psum + tsum + s));
}

template <typename T>
void soft_dice_backward_acc(const Tensor<T>& pred, const Tensor<T>& target, Tensor<T>& grad,
                            double smooth) {
  require_same_shape(pred, target, "soft_dice_backward");
  require_same_shape(pred, grad, "soft_dice_backward");
  const T* p = pred.data();
  const T* t = target.data();
  T inter = T(0), psum = T(0), tsum = T(0);
  for (std::uint64_t i = 0; i < pred.elems(); ++i) {
    inter += p[i] * t[i];
    psum += p[i];
    tsum += t[i];
  }
  const T s = static_cast<T>(smooth);
  const T numer = T(2) * inter + s;
  const T denom = psum + tsum + s;
  T* g = grad.data();
  // d/dp_i of (1 - numer/denom) = -(2 t_i denom - numer) / denom^2
  for (std::uint64_t i = 0; i < pred.elems(); ++i) {
    g[i] += -(T(2) * t[i] * denom - numer) / (denom * denom);
  }
}

template <typename T>
Tensor<T> soft_dice_backward(const Tensor<T>& pred, const Tensor<T>& target, double smooth,
                             MemTracker* tracker) {
  Tensor<T> grad(pred.shape(), tracker);
  soft_dice_backward_acc(pred, target, grad, smooth);
  return grad;
}

template <typename T>
double bce_loss(const Tensor<T>& pred, const Tensor<T>& target, double epsilon) {
  require_same_shape(pred, target, "bce_loss");
  const T lo = static_cast<T>(epsilon);
  const T hi = T(1) - lo;
  const T* p = pred.data();
  const T* t = target.data();
  T sum = T(0);
  for (std::uint64_t i = 0; i < pred.elems(); ++i) {
    const T ph = p[i] < lo ? lo : (p[i] > hi ? hi : p[i]);
    sum += -(t[i] * std::log(ph) + (T(1) - t[i]) * std::log(T(1) - ph));
  }
  return double(sum) / static_cast<double>(pred.elems());
}

template <typename T>
void bce_backward_acc(const Tensor<T>& pred, const Tensor<T>& target, Tensor<T>& grad,
                      double epsilon) {
  require_same_shape(pred, target, "bce_backward");
  require_same_shape(pred, grad, "bce_backward");
  const T lo = static_cast<T>(epsilon);
  const T hi = T(1) - lo;
  const T inv_count = T(1) / static_cast<T>(pred.elems());
  const T* p = pred.data();
  const T* t = target.data();
  T* g = grad.data();
  for (std::uint64_t i = 0; i < pred.elems(); ++i) {
    if (p[i] < lo || p[i] > hi) continue;  // clamp active, derivative zero
    g[i] += inv_count * (p[i] - t[i]) / (p[i] * (T(1) - p[i]));
  }
}

template <typename T>
Tensor<T> bce_backward(const Tensor<T>& pred, const Tensor<T>& target, double epsilon,
                       MemTracker* tracker) {
  Tensor<T> grad(pred.shape(), tracker);
  bce_backward_acc(pred, target, grad, epsilon);
  return grad;
}

template <typename T>
double loss_forward(LossKind kind, const Tensor<T>& pred, const Tensor<T>& target) {
  switch (kind) {
    case LossKind::bce: return bce_loss(pred, target);
    case LossKind::soft_dice: return soft_dice_loss(pred, target);
    case LossKind::bce_plus_dice: return bce_loss(pred, target) + soft_dice_loss(pred, target);
  }
  throw std::logic_error("unhandled loss kind");
}

template <typename T>
void loss_backward_acc(LossKind kind, const Tensor<T>& pred, const Tensor<T>& target,
                       Tensor<T>& grad) {
  switch (kind) {
    case LossKind::bce:
      bce_backward_acc(pred, target, grad);
      return;
    case LossKind::soft_dice:
      soft_dice_backward_acc(pred, target, grad);
      return;
    case LossKind::bce_plus_dice:
      bce_backward_acc(pred, target, grad);
      soft_dice_backward_acc(pred, target, grad);
      return;
  }
  throw std::logic_error("unhandled loss kind");
}

#define VOXPLAN_INSTANTIATE(T)                                                                  \
  template double soft_dice_loss<T>(const Tensor<T>&, const Tensor<T>&, double);                \
  template void soft_dice_backward_acc<T>(const Tensor<T>&, const Tensor<T>&, Tensor<T>&,      \
                                          double);                                             \
  template Tensor<T> soft_dice_backward<T>(const Tensor<T>&, const Tensor<T>&, double,         \
                                           MemTracker*);                                       \
  template double bce_loss<T>(const Tensor<T>&, const Tensor<T>&, double);                     \
  template void bce_backward_acc<T>(const Tensor<T>&, const Tensor<T>&, Tensor<T>&, double);   \
  template Tensor<T> bce_backward<T>(const Tensor<T>&, const Tensor<T>&, double, MemTracker*); \
  template double loss_forward<T>(LossKind, const Tensor<T>&, const Tensor<T>&);               \
  template void loss_backward_acc<T>(LossKind, const Tensor<T>&, const Tensor<T>&, Tensor<T>&);

VOXPLAN_INSTANTIATE(float)
VOXPLAN_INSTANTIATE(double)

#undef VOXPLAN_INSTANTIATE

}  // namespace voxplan
