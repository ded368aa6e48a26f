#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace voxplan {

/// Element precision of tensors, volumes and parameter buffers.
enum class Precision { f32, f64 };

inline int byte_width(Precision p) { return p == Precision::f32 ? 4 : 8; }

inline const char* precision_name(Precision p) {
  return p == Precision::f32 ? "single" : "double";
}

Precision parse_precision(const std::string& name);

/// Multiplies with overflow detection; `what` names the quantity in the error.
inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* what) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw std::overflow_error(std::string("arithmetic overflow while computing ") + what);
  }
  return r;
}

/// 5-D tensor geometry in (n, c, d, h, w) order, row-major with w fastest.
///
/// Weight tensors reuse the same five slots as (k, k, k, c_in, c_out); the
/// field names only carry their activation meaning for node outputs.
struct TensorShape {
  std::int64_t n = 1;
  std::int64_t c = 1;
  std::int64_t d = 1;
  std::int64_t h = 1;
  std::int64_t w = 1;

  bool operator==(const TensorShape&) const = default;

  bool valid() const { return n >= 1 && c >= 1 && d >= 1 && h >= 1 && w >= 1; }

  void require_valid() const {
    if (!valid()) throw std::invalid_argument("invalid tensor shape " + to_string() + ": all dims must be >= 1");
  }

  /// Total element count with checked arithmetic.
  std::uint64_t elem_count() const {
    require_valid();
    std::uint64_t e = checked_mul(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(c), "elem_count");
    e = checked_mul(e, static_cast<std::uint64_t>(d), "elem_count");
    e = checked_mul(e, static_cast<std::uint64_t>(h), "elem_count");
    e = checked_mul(e, static_cast<std::uint64_t>(w), "elem_count");
    return e;
  }

  std::int64_t spatial_elems() const { return d * h * w; }

  std::string to_string() const {
    return "(" + std::to_string(n) + "," + std::to_string(c) + "," + std::to_string(d) + "," +
           std::to_string(h) + "," + std::to_string(w) + ")";
  }
};

}  // namespace voxplan
