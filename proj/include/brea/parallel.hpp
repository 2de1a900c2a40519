#pragma once

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace brea {

// Runs body(i) for i in [0, n). When parallel is true the iterations are
// spread over OpenMP threads. Bodies must write disjoint outputs and must
// not depend on execution order, so serial and parallel runs produce
// identical results.
template <class F>
void parallel_for(std::int64_t n, bool parallel, F&& body) {
#ifdef _OPENMP
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
#else
  (void)parallel;
#endif
  for (std::int64_t i = 0; i < n; ++i) body(i);
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace brea
