#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace rsdkit::detail {

// Runs fn(i) for i in [0, n) across `threads` workers pulling from a shared
// atomic counter.  The first exception thrown by any worker is rethrown on
// the calling thread after all workers finish.
template <typename F>
void parallel_for(std::int64_t n, int threads, F&& fn) {
  if (n <= 0) return;
  if (threads <= 1 || n == 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const int worker_count = static_cast<int>(std::min<std::int64_t>(threads, n));
  std::vector<std::jthread> workers;
  workers.reserve(static_cast<std::size_t>(worker_count));
  for (int t = 0; t < worker_count; ++t) {
    workers.emplace_back([&] {
      while (true) {
        const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  workers.clear();  // join
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace rsdkit::detail
