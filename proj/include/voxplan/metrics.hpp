#pragma once

#include <cstdint>
#include <span>

#include "voxplan/tensor.hpp"

namespace voxplan {

struct Confusion {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;
  std::uint64_t total() const { return tp + fp + fn + tn; }
};

/// Voxel confusion counts between two binary masks (values exactly 0 or 1).
template <typename T>
Confusion confusion_voxels(std::span<const T> pred_mask, std::span<const T> target_mask);

/// 2|A n B| / (|A| + |B|); 1.0 when both masks are empty.
template <typename T>
double dice_coefficient(std::span<const T> pred_mask, std::span<const T> target_mask);

template <typename T>
double accuracy(std::span<const T> pred_mask, std::span<const T> target_mask);

template <typename T>
Confusion confusion_voxels(const Tensor<T>& pred, const Tensor<T>& target) {
  require_same_shape(pred, target, "confusion_voxels");
  return confusion_voxels<T>(pred.span(), target.span());
}

template <typename T>
double dice_coefficient(const Tensor<T>& pred, const Tensor<T>& target) {
  require_same_shape(pred, target, "dice_coefficient");
  return dice_coefficient<T>(pred.span(), target.span());
}

template <typename T>
double accuracy(const Tensor<T>& pred, const Tensor<T>& target) {
  require_same_shape(pred, target, "accuracy");
  return accuracy<T>(pred.span(), target.span());
}

/// Binarizes probabilities: 1 where p > threshold, else 0.
template <typename T>
Tensor<T> threshold_mask(const Tensor<T>& probs, double threshold, MemTracker* tracker = nullptr);

}  // namespace voxplan
