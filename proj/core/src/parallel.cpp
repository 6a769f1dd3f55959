#include "reslab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace reslab {

namespace {
std::atomic<int> g_threads{0};
}

int thread_count() {
  const int t = g_threads.load(std::memory_order_relaxed);
  if (t > 0) return t;
  return std::max(1u, std::thread::hardware_concurrency());
}

void set_thread_count(int threads) {
  g_threads.store(std::max(0, threads), std::memory_order_relaxed);
}

}  // namespace reslab
