#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace minext::par {

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Runs fn(i) for i in [0, n). Iterations must be independent; results are
// written to per-index slots so the outcome does not depend on scheduling.
template <class Fn>
void for_index(std::size_t n, Fn&& fn) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        fn(static_cast<std::size_t>(i));
    }
#else
    for (std::size_t i = 0; i < n; ++i) fn(i);
#endif
}

// Serial reference for the kernel above, kept for equivalence tests and
// benchmarking.
template <class Fn>
void for_index_serial(std::size_t n, Fn&& fn) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace minext::par
