#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace polywind {

inline unsigned resolve_workers(unsigned hint, std::size_t tasks) {
  unsigned w = hint != 0 ? hint : std::max(1u, std::thread::hardware_concurrency());
  if (tasks < w) w = static_cast<unsigned>(std::max<std::size_t>(tasks, 1));
  return w;
}

// Runs body(i) for i in [0, count). Each index is executed exactly once; the
// body must only write to slots owned by its index. The first exception thrown
// by any worker is rethrown on the calling thread.
template <class Body>
void parallel_for(std::size_t count, unsigned workers_hint, Body&& body) {
  const unsigned workers = resolve_workers(workers_hint, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };

  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
  pool.clear();  // joins
  if (error) std::rethrow_exception(error);
}

}  // namespace polywind
