#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace nlbvp {

// Runs fn(0..n-1) across hardware threads. Results must be written into
// index-addressed slots by the caller, which keeps assembly deterministic.
inline void parallel_for(long n, const std::function<void(long)>& fn) {
  unsigned hw = std::thread::hardware_concurrency();
  long nthreads = static_cast<long>(hw ? hw : 4);
  if (nthreads > n) nthreads = n;
  if (nthreads <= 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr first_error = nullptr;
  std::mutex err_mutex;
  auto worker = [&] {
    for (;;) {
      long i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(nthreads));
  for (long i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace nlbvp
