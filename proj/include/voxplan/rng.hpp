#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

namespace voxplan {

/// Seeded random stream with fully specified mappings, so any consumer
/// (phantom generation, weight init, epoch shuffles) is reproducible from
/// its seed alone:
///   - raw stream: std::mt19937_64, whose algorithm the standard pins down
///   - uniform [0,1): top 53 bits scaled, (x >> 11) * 2^-53
///   - uniform_int [lo,hi]: modulo mapping of the raw draw
///   - normal(0,1): Box-Muller pair, z0 = sqrt(-2 ln u1) cos(2 pi u2),
///     z1 = sqrt(-2 ln u1) sin(2 pi u2), with u1 in (0,1]; one value cached
/// (std::shuffle and std::normal_distribution are implementation-defined,
/// which is why they are not used here).
class DetRng {
 public:
  explicit DetRng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Inclusive on both ends.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next_u64() % span);
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0,1], keeps the log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Fisher-Yates with the documented uniform_int mapping.
template <typename V>
void deterministic_shuffle(V& values, DetRng& rng) {
  for (std::int64_t i = static_cast<std::int64_t>(values.size()) - 1; i > 0; --i) {
    const std::int64_t j = rng.uniform_int(0, i);
    std::swap(values[static_cast<std::size_t>(i)], values[static_cast<std::size_t>(j)]);
  }
}

}  // namespace voxplan
