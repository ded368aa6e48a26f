#include "voxplan/metrics.hpp"

#include <stdexcept>
#include <string>

namespace voxplan {

namespace {

template <typename T>
bool as_bit(T v, std::size_t i) {
  if (v == T(0)) return false;
  if (v == T(1)) return true;
  throw std::invalid_argument("mask is not binary: value " + std::to_string(double(v)) +
                              " at flat index " + std::to_string(i));
}

}  // namespace

template <typename T>
Confusion confusion_voxels(std::span<const T> pred_mask, std::span<const T> target_mask) {
  if (pred_mask.size() != target_mask.size()) {
    throw std::invalid_argument("confusion_voxels: mask sizes differ");
  }
  Confusion c;
  for (std::size_t i = 0; i < pred_mask.size(); ++i) {
    const bool p = as_bit(pred_mask[i], i);
    const bool t = as_bit(target_mask[i], i);
    if (p && t) ++c.tp;
    else if (p && !t) ++c.fp;
    else if (!p && t) ++c.fn;
    else ++c.tn;
  }
  return c;
}

template <typename T>
double dice_coefficient(std::span<const T> pred_mask, std::span<const T> target_mask) {
  const Confusion c = confusion_voxels(pred_mask, target_mask);
  const std::uint64_t denom = 2 * c.tp + c.fp + c.fn;  // |A| + |B|
  if (denom == 0) return 1.0;  // both raters agree there is nothing
  return 2.0 * static_cast<double>(c.tp) / static_cast<double>(denom);
}

template <typename T>
double accuracy(std::span<const T> pred_mask, std::span<const T> target_mask) {
  const Confusion c = confusion_voxels(pred_mask, target_mask);
  if (c.total() == 0) throw std::invalid_argument("accuracy of empty masks is undefined");
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
}

template <typename T>
Tensor<T> threshold_mask(const Tensor<T>& probs, double threshold, MemTracker* tracker) {
  Tensor<T> mask(probs.shape(), tracker);
  const T thr = static_cast<T>(threshold);
  const T* p = probs.data();
  T* m = mask.data();
  for (std::uint64_t i = 0; i < probs.elems(); ++i) m[i] = p[i] > thr ? T(1) : T(0);
  return mask;
}

#define VOXPLAN_INSTANTIATE(T)                                                       \
  template Confusion confusion_voxels<T>(std::span<const T>, std::span<const T>);    \
  template double dice_coefficient<T>(std::span<const T>, std::span<const T>);       \
  template double accuracy<T>(std::span<const T>, std::span<const T>);               \
  template Tensor<T> threshold_mask<T>(const Tensor<T>&, double, MemTracker*);

VOXPLAN_INSTANTIATE(float)
VOXPLAN_INSTANTIATE(double)

#undef VOXPLAN_INSTANTIATE

}  // namespace voxplan
