#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace qmm {

// Runs fn(i) for i in [0, n) across up to max_threads workers. Work items are
// claimed from a shared counter; callers must write results keyed by index so
// the outcome is independent of scheduling order.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                         unsigned max_threads = 0) {
  if (max_threads == 0) max_threads = std::thread::hardware_concurrency();
  if (max_threads == 0) max_threads = 1;
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(max_threads, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace qmm
