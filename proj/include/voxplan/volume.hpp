#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "voxplan/shape.hpp"
#include "voxplan/tensor.hpp"

namespace voxplan {

/// Single-channel voxel grid, row-major (d, h, w) with w fastest.
template <typename T>
struct Volume {
  std::int64_t d = 0;
  std::int64_t h = 0;
  std::int64_t w = 0;
  std::vector<T> data;

  Volume() = default;
  Volume(std::int64_t d_, std::int64_t h_, std::int64_t w_)
      : d(d_), h(h_), w(w_), data(static_cast<std::size_t>(d_ * h_ * w_)) {
    if (d_ < 1 || h_ < 1 || w_ < 1) throw std::invalid_argument("volume dims must be >= 1");
  }

  std::uint64_t elems() const { return data.size(); }
  bool same_dims(const Volume& o) const { return d == o.d && h == o.h && w == o.w; }
};

/// Image volume plus its binary ground-truth mask.
template <typename T>
struct Sample {
  Volume<T> image;
  Volume<T> mask;
};

template <typename T>
Tensor<T> volume_to_tensor(const Volume<T>& v, std::int64_t batch = 1) {
  if (batch != 1) throw std::invalid_argument("volume_to_tensor expects batch 1");
  Tensor<T> t(TensorShape{1, 1, v.d, v.h, v.w});
  std::copy(v.data.begin(), v.data.end(), t.data());
  return t;
}

template <typename T>
void require_binary_volume(const Volume<T>& v, const std::string& what) {
  for (std::size_t i = 0; i < v.data.size(); ++i) {
    if (v.data[i] != T(0) && v.data[i] != T(1)) {
      throw std::invalid_argument(what + ": mask is not binary at flat index " + std::to_string(i));
    }
  }
}

}  // namespace voxplan
