#pragma once

#include <atomic>
#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace stylo::parallel {

// Process-wide worker cap (CLI --jobs). 0 = OpenMP default.
inline std::atomic<int>& jobs_ref() {
    static std::atomic<int> j{0};
    return j;
}

inline void set_jobs(int jobs) { jobs_ref().store(jobs); }
inline int jobs() { return jobs_ref().load(); }

// Index-parallel loop. Each body writes only to its own slot, so results are
// identical to the serial path for any thread count.
template <typename Fn>
void for_each_index(size_t n, Fn&& fn) {
#ifdef _OPENMP
    if (jobs() != 1 && n > 1) {
        int nt = jobs() > 0 ? jobs() : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            fn(static_cast<size_t>(i));
        }
        return;
    }
#endif
    for (size_t i = 0; i < n; ++i) fn(i);
}

// Serial reference for tests and the benchmark tool.
template <typename Fn>
void for_each_index_serial(size_t n, Fn&& fn) {
    for (size_t i = 0; i < n; ++i) fn(i);
}

inline double wtime() {
#ifdef _OPENMP
    return omp_get_wtime();
#else
    return 0.0;
#endif
}

} // namespace stylo::parallel
