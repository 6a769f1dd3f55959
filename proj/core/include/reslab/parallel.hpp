#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace reslab {

/// Number of worker threads used by the data-parallel loops (per-mode,
/// per-frequency). Defaults to the hardware concurrency.
int thread_count();
void set_thread_count(int threads);

/// Runs body(i) for i in [0, count). Iterations must not share mutable
/// state; results are therefore independent of the thread count. The first
/// exception thrown by any iteration is rethrown after the loop.
template <class Body>
void parallel_for(std::ptrdiff_t count, Body&& body) {
  std::exception_ptr error;
  std::mutex mu;
#if defined(_OPENMP)
#pragma omp parallel for schedule(static) num_threads(thread_count())
#endif
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace reslab
