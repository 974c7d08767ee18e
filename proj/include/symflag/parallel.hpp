#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace symflag {

/// Number of worker threads: hardware concurrency, capped by the
/// SYMFLAG_THREADS environment variable when it holds a positive integer.
std::size_t worker_count();

/// Calls body(i) for i in [0, count) on up to worker_count() threads. Each
/// index runs exactly once; callers store results by index, so output order
/// does not depend on scheduling. The first exception thrown is rethrown.
template <class F>
void parallel_for(std::size_t count, F&& body) {
  const std::size_t workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

} // namespace symflag
