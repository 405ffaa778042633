#ifndef KFORGE_PARALLEL_HPP
#define KFORGE_PARALLEL_HPP

#include <cstdint>

namespace kforge {

/// Worker cap: min(omp_get_max_threads(), KFORGE_THREADS) when the env var is
/// set to a positive integer, otherwise the OpenMP default.
int worker_count();

/// Static-schedule parallel loop over [0, n). Iterations must be independent;
/// each writes only its own slots, so results are bitwise identical to the
/// serial loop.
template <typename Fn>
void parallel_for(std::int64_t n, Fn&& fn) {
#pragma omp parallel for schedule(static) num_threads(::kforge::worker_count())
    for (std::int64_t i = 0; i < n; ++i) fn(i);
}

} // namespace kforge

#endif
