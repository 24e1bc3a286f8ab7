#pragma once

#include <cstddef>

namespace exosuit {

enum class RunMode { serial, parallel };

/// Runs fn(i) for i in [0, n). RunMode::parallel fans the iterations out over
/// an OpenMP thread pool; RunMode::serial is the reference path used by tests
/// to pin down expected results. Tasks must be independent: each writes only
/// its own pre-allocated slot, and any randomness is seeded per index.
template <typename Fn>
void for_each_index(size_t n, RunMode mode, Fn&& fn) {
#ifdef _OPENMP
  if (mode == RunMode::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      fn(static_cast<size_t>(i));
    return;
  }
#else
  (void)mode;
#endif
  for (size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace exosuit
