#pragma once

#include <cstdint>
#include <cstring>
#include <memory>
#include <span>
#include <stdexcept>
#include <type_traits>

#include "voxplan/alloc.hpp"
#include "voxplan/shape.hpp"

namespace voxplan {

template <typename T>
inline constexpr Precision precision_of = std::is_same_v<T, float> ? Precision::f32 : Precision::f64;

/// Index element type used for max-pool argmax buffers; sized to the
/// tensor's element width so tracked bytes match the plan.
template <typename T>
using index_t = std::conditional_t<std::is_same_v<T, float>, std::uint32_t, std::uint64_t>;

/// Dense row-major (n,c,d,h,w) buffer. Copies share the underlying storage;
/// shared tensors are immutable by contract and mutation is reserved for
/// uniquely-owned buffers. Allocation and destruction report to the
/// MemTracker the tensor was created with, if any.
template <typename T>
class Tensor {
 public:
  Tensor() = default;

  /// Zero-initialized tensor.
  explicit Tensor(const TensorShape& shape, MemTracker* tracker = nullptr)
      : shape_(shape), elems_(shape.elem_count()) {
    const std::uint64_t bytes = elems_ * sizeof(T);
    T* raw = new T[elems_]();
    data_ = std::shared_ptr<T[]>(raw, [tracker, bytes](T* p) {
      delete[] p;
      if (tracker != nullptr) tracker->on_free(bytes);
    });
    if (tracker != nullptr) tracker->on_alloc(bytes);
  }

  static Tensor full(const TensorShape& shape, T value, MemTracker* tracker = nullptr) {
    Tensor t(shape, tracker);
    for (std::uint64_t i = 0; i < t.elems_; ++i) t.data_[i] = value;
    return t;
  }

  bool defined() const { return static_cast<bool>(data_); }
  const TensorShape& shape() const { return shape_; }
  std::uint64_t elems() const { return elems_; }
  std::uint64_t bytes() const { return elems_ * sizeof(T); }

  T* data() { return data_.get(); }
  const T* data() const { return data_.get(); }
  std::span<T> span() { return {data_.get(), elems_}; }
  std::span<const T> span() const { return {data_.get(), elems_}; }

  T& operator[](std::uint64_t i) { return data_[i]; }
  const T& operator[](std::uint64_t i) const { return data_[i]; }

  /// Deep copy into a fresh (optionally tracked) buffer.
  Tensor clone(MemTracker* tracker = nullptr) const {
    Tensor out(shape_, tracker);
    std::memcpy(out.data(), data(), bytes());
    return out;
  }

  /// Drops this reference to the storage (frees it if last).
  void reset() {
    data_.reset();
    elems_ = 0;
    shape_ = TensorShape{1, 1, 1, 1, 1};
  }

  void fill(T value) {
    for (std::uint64_t i = 0; i < elems_; ++i) data_[i] = value;
  }

 private:
  TensorShape shape_{1, 1, 1, 1, 1};
  std::uint64_t elems_ = 0;
  std::shared_ptr<T[]> data_;
};

template <typename T>
void require_same_shape(const Tensor<T>& a, const Tensor<T>& b, const char* what) {
  if (!(a.shape() == b.shape())) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch " + a.shape().to_string() +
                                " vs " + b.shape().to_string());
  }
}

}  // namespace voxplan
