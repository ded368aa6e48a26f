#include "voxplan/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace voxplan {

namespace {

int initial_thread_count() {
  if (const char* env = std::getenv("VOXPLAN_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

int g_threads = initial_thread_count();

}  // namespace

void set_thread_count(int n) { g_threads = std::max(1, n); }

int thread_count() { return g_threads; }

void parallel_for(std::int64_t count, const std::function<void(std::int64_t, std::int64_t)>& body) {
  if (count <= 0) return;
  const std::int64_t workers = std::min<std::int64_t>(g_threads, count);
  if (workers <= 1) {
    body(0, count);
    return;
  }
  const std::int64_t chunk = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers) - 1);
  for (std::int64_t t = 1; t < workers; ++t) {
    const std::int64_t begin = t * chunk;
    const std::int64_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  body(0, std::min(count, chunk));
  for (std::thread& th : pool) th.join();
}

}  // namespace voxplan
