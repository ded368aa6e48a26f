#pragma once

#include <atomic>
#include <cstdint>

namespace voxplan {

struct AllocStats {
  std::uint64_t current_live_bytes = 0;
  std::uint64_t peak_live_bytes = 0;
  std::uint64_t alloc_count = 0;
  std::uint64_t free_count = 0;
};

/// Byte accounting for every buffer the executor creates. Thread-safe;
/// per-sample workers report through the same tracker.
class MemTracker {
 public:
  void on_alloc(std::uint64_t bytes) noexcept {
    allocs_.fetch_add(1, std::memory_order_relaxed);
    const std::uint64_t live = current_.fetch_add(bytes, std::memory_order_relaxed) + bytes;
    std::uint64_t peak = peak_.load(std::memory_order_relaxed);
    while (live > peak && !peak_.compare_exchange_weak(peak, live, std::memory_order_relaxed)) {
    }
  }

  void on_free(std::uint64_t bytes) noexcept {
    frees_.fetch_add(1, std::memory_order_relaxed);
    current_.fetch_sub(bytes, std::memory_order_relaxed);
  }

  /// Restarts the peak watermark at the current live level (per-step peaks).
  void rebase_peak() noexcept { peak_.store(current_.load(std::memory_order_relaxed), std::memory_order_relaxed); }

  void reset() noexcept {
    current_.store(0);
    peak_.store(0);
    allocs_.store(0);
    frees_.store(0);
  }

  AllocStats stats() const noexcept {
    AllocStats s;
    s.current_live_bytes = current_.load(std::memory_order_relaxed);
    s.peak_live_bytes = peak_.load(std::memory_order_relaxed);
    s.alloc_count = allocs_.load(std::memory_order_relaxed);
    s.free_count = frees_.load(std::memory_order_relaxed);
    return s;
  }

 private:
  std::atomic<std::uint64_t> current_{0};
  std::atomic<std::uint64_t> peak_{0};
  std::atomic<std::uint64_t> allocs_{0};
  std::atomic<std::uint64_t> frees_{0};
};

}  // namespace voxplan
