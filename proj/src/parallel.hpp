#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace nskw::detail {

inline int thread_count(int items) {
  int workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers <= 0) workers = 1;
  if (const char* cap = std::getenv("NSKW_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(cap, &end, 10);
    if (end != cap && v > 0) workers = std::min(workers, static_cast<int>(v));
  }
  return std::max(1, std::min(workers, items));
}

// Runs fn(i) for i in [0, items) across up to NSKW_THREADS workers. Callers
// write results into per-index slots and reduce after the join, so the
// outcome does not depend on scheduling. The first exception wins and is
// rethrown on the calling thread.
template <typename Fn>
void parallel_for(int items, Fn&& fn) {
  const int workers = thread_count(items);
  if (workers <= 1) {
    for (int i = 0; i < items; ++i) fn(i);
    return;
  }

  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (int i = next.fetch_add(1); i < items; i = next.fetch_add(1)) {
      if (failed.load(std::memory_order_relaxed)) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace nskw::detail
