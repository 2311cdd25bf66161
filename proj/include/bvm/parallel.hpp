#pragma once

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bvm {

// Runs fn(replica_index) for indices [0, n). Replicas must be independent:
// each derives its own rng stream from its index and writes only to its own
// slot, so results do not depend on scheduling and the parallel and serial
// paths produce identical output.
template <typename Fn>
void for_each_replica(std::int64_t n, bool parallel, Fn&& fn) {
#ifdef _OPENMP
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
#else
  (void)parallel;
#endif
  for (std::int64_t i = 0; i < n; ++i) fn(i);
}

inline int replica_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace bvm
