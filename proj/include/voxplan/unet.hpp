#pragma once

#include <cstdint>

#include "voxplan/graph.hpp"
#include "voxplan/shape.hpp"

namespace voxplan {

/// Hyperparameters of the 3D U-Net topology.
///
/// depth counts pooling levels; each spatial dim must be divisible by
/// 2^depth. base_filters is the channel count of the top encoder level and
/// doubles per level.
struct UNetSpec {
  std::int64_t in_channels = 1;
  std::int64_t num_classes = 1;
  int depth = 2;
  std::int64_t base_filters = 8;
  std::int64_t d = 32;
  std::int64_t h = 32;
  std::int64_t w = 32;
  std::int64_t batch = 1;
  Precision precision = Precision::f32;

  void validate() const;

  TensorShape input_shape() const { return TensorShape{batch, in_channels, d, h, w}; }
};

/// Builds the segmentation network:
///   encoder level 0: two Conv3d(k=3, F) + ReLU
///   levels 1..depth: MaxPool3d, then two Conv3d(k=3, F*2^i) + ReLU
///   decoder i = depth-1..0: Upsample3d, Concat with encoder level-i output,
///     two Conv3d(k=3, F*2^i) + ReLU
///   head: Conv3d(k=1, num_classes) + Sigmoid
/// Node ids are deterministic (construction order).
Graph build_unet(const UNetSpec& spec);

}  // namespace voxplan
