#pragma once

#include <string>

#include "voxplan/tensor.hpp"

namespace voxplan {

enum class LossKind { bce, soft_dice, bce_plus_dice };

LossKind parse_loss(const std::string& name);
const char* loss_name(LossKind kind);

/// 1 - (2*sum(p*t) + smooth) / (sum(p) + sum(t) + smooth).
/// Requires pred in [0,1] and matching shapes; sums run in element
/// precision, in flat index order.
template <typename T>
double soft_dice_loss(const Tensor<T>& pred, const Tensor<T>& target, double smooth = 1.0);

template <typename T>
void soft_dice_backward_acc(const Tensor<T>& pred, const Tensor<T>& target, Tensor<T>& grad,
                            double smooth = 1.0);

template <typename T>
Tensor<T> soft_dice_backward(const Tensor<T>& pred, const Tensor<T>& target, double smooth = 1.0,
                             MemTracker* tracker = nullptr);

/// Mean of -[t*ln(p) + (1-t)*ln(1-p)] with p clamped to [eps, 1-eps].
/// The gradient is zero where the clamp is active.
template <typename T>
double bce_loss(const Tensor<T>& pred, const Tensor<T>& target, double epsilon = 1e-7);

template <typename T>
void bce_backward_acc(const Tensor<T>& pred, const Tensor<T>& target, Tensor<T>& grad,
                      double epsilon = 1e-7);

template <typename T>
Tensor<T> bce_backward(const Tensor<T>& pred, const Tensor<T>& target, double epsilon = 1e-7,
                       MemTracker* tracker = nullptr);

/// bce_plus_dice is the plain sum of the two terms.
template <typename T>
double loss_forward(LossKind kind, const Tensor<T>& pred, const Tensor<T>& target);

template <typename T>
void loss_backward_acc(LossKind kind, const Tensor<T>& pred, const Tensor<T>& target,
                       Tensor<T>& grad);

}  // namespace voxplan
