#pragma once

#include <cstdint>
#include <functional>

namespace voxplan {

/// Worker count for kernel-level parallelism. Initialized from the
/// VOXPLAN_THREADS environment variable, falling back to the hardware
/// thread count. Results are bitwise independent of this setting: tasks
/// write disjoint ranges and every floating-point reduction runs in a fixed
/// order inside a single task.
void set_thread_count(int n);
int thread_count();

/// Runs body(begin, end) over a static contiguous partition of [0, count).
void parallel_for(std::int64_t count, const std::function<void(std::int64_t, std::int64_t)>& body);

}  // namespace voxplan
