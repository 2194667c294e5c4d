#pragma once

#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lrt::par {

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Parallel loop over [0, n). Chunking is OpenMP static, but every iteration
// writes only its own slot, so results never depend on the thread count.
template <class F>
void parallel_for(std::int64_t n, F&& body) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t i = 0; i < n; ++i) body(i);
}

template <class F>
void serial_for(std::int64_t n, F&& body) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
}

// Deterministic sum reduction: the index range is cut into a fixed number of
// blocks that does not depend on the thread count, block partials are
// accumulated left to right inside each block, and the partials are combined
// in block order. Same floating-point result for 1 thread or 64.
inline constexpr std::int64_t kReduceBlocks = 256;

template <class F>
double block_sum(std::int64_t n, F&& term) {
    if (n <= 0) return 0.0;
    const std::int64_t nb = n < kReduceBlocks ? n : kReduceBlocks;
    const std::int64_t chunk = (n + nb - 1) / nb;
    std::vector<double> partial(static_cast<std::size_t>(nb), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t b = 0; b < nb; ++b) {
        const std::int64_t lo = b * chunk;
        const std::int64_t hi = lo + chunk < n ? lo + chunk : n;
        double s = 0.0;
        for (std::int64_t i = lo; i < hi; ++i) s += term(i);
        partial[static_cast<std::size_t>(b)] = s;
    }
    double total = 0.0;
    for (std::int64_t b = 0; b < nb; ++b) total += partial[static_cast<std::size_t>(b)];
    return total;
}

}  // namespace lrt::par
