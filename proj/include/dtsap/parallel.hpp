#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dtsap {

// Serial is the reference path; Parallel must produce identical results.
enum class Execution { Serial, Parallel };

// Runs body(i) for i in [0, n). Each index must write only its own outputs.
// The first exception thrown by any index is rethrown after the loop.
template <class Body>
void for_each_index(std::size_t n, Execution mode, Body&& body, int threads = 0) {
  if (mode == Execution::Serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex guard;
  const long count = static_cast<long>(n);
#ifdef _OPENMP
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
#else
  (void)threads;
#endif
  for (long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace dtsap

