#include "cheb2d/parallel.hpp"

#include <atomic>

#include "cheb2d/errors.hpp"

namespace cheb2d {

namespace {
std::atomic<int> g_threads{1};
}

int thread_count() noexcept { return g_threads.load(std::memory_order_relaxed); }

void set_thread_count(int n) {
  if (n < 1) throw ArgumentError("thread count must be >= 1, got " + std::to_string(n));
  g_threads.store(n, std::memory_order_relaxed);
}

}  // namespace cheb2d
