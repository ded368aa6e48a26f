#pragma once

#include <cstdint>
#include <vector>

#include "voxplan/volume.hpp"

namespace voxplan {

/// Synthetic volume recipe: Gaussian background noise plus a random set of
/// bright ellipsoids whose union is the ground-truth mask.
struct PhantomSpec {
  std::int64_t d = 32;
  std::int64_t h = 32;
  std::int64_t w = 32;
  int min_ellipsoids = 1;
  int max_ellipsoids = 3;
  double min_radius = 3.0;
  double max_radius = 7.0;
  double min_intensity = 0.6;
  double max_intensity = 1.0;
  double noise_stddev = 0.05;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Ellipsoid {
  double cz = 0, cy = 0, cx = 0;
  double rz = 1, ry = 1, rx = 1;
  double intensity = 1;

  bool contains(std::int64_t z, std::int64_t y, std::int64_t x) const {
    const double az = (static_cast<double>(z) - cz) / rz;
    const double ay = (static_cast<double>(y) - cy) / ry;
    const double ax = (static_cast<double>(x) - cx) / rx;
    return az * az + ay * ay + ax * ax <= 1.0;
  }
};

/// Deterministic per seed. Draw order (one DetRng stream):
///   1. one normal(0, noise_stddev) per voxel in row-major order
///   2. ellipsoid count, uniform in [min_ellipsoids, max_ellipsoids]
///   3. per ellipsoid: rz, ry, rx; cz, cy, cx (uniform in [r, dim-1-r]);
///      intensity
/// Every ellipsoid's intensity is added over its interior; the mask is the
/// union of interiors.
template <typename T>
Sample<T> generate_phantom(const PhantomSpec& spec, std::vector<Ellipsoid>* shapes_out = nullptr);

}  // namespace voxplan
