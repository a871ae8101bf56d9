#pragma once

#include <cstdint>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace drivencft {

enum class ExecutionPolicy { serial, parallel };

inline int effective_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_thread_count(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

// Deterministic parallel map: every index is processed exactly once and
// callers must write results into per-index slots, so the outcome is
// independent of thread count and scheduling. Dynamic scheduling balances
// wildly uneven per-index work (ensemble lifetimes, heatmap cells).
template <typename F>
void parallel_for(std::int64_t n, ExecutionPolicy pol, F&& f) {
#ifdef _OPENMP
  if (pol == ExecutionPolicy::parallel && n > 1) {
    std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        f(i);
      } catch (...) {
#pragma omp critical
        {
          if (!err) err = std::current_exception();
        }
      }
    }
    if (err) std::rethrow_exception(err);
    return;
  }
#endif
  for (std::int64_t i = 0; i < n; ++i) f(i);
}

}  // namespace drivencft
