#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace cheb2d {

/// Number of worker threads used by the data-parallel loops. Defaults to 1.
int thread_count() noexcept;
void set_thread_count(int n);

/// Runs body(idx) for idx in [0, n). Work is split into contiguous blocks so
/// every index is handled exactly once; results written per index are
/// therefore independent of the thread count. The first exception thrown by
/// the lowest-indexed failing block is rethrown on the calling thread.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n);
  if (workers <= 1) {
    for (std::size_t idx = 0; idx < n; ++idx) body(idx);
    return;
  }
  std::vector<std::exception_ptr> failures(workers);
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t block = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * block;
    const std::size_t end = std::min(n, begin + block);
    pool.emplace_back([&, w, begin, end] {
      try {
        for (std::size_t idx = begin; idx < end; ++idx) body(idx);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  pool.clear();
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
}

}  // namespace cheb2d
