// Row-parallel loops and deterministic reductions.
//
// Every parallel loop writes disjoint outputs, and reductions sum per-row
// partials in row order, so results do not depend on the thread count.
#pragma once

#include <vector>

#ifdef ADAREG_HAVE_OPENMP
#include <omp.h>
#endif

namespace adareg {

/// Sets the worker count for subsequent parallel loops (<= 0 keeps the
/// runtime default). No-op without OpenMP.
void set_thread_count(int n);
int thread_count();

template <class Fn>
void parallel_rows(int height, Fn&& fn) {
#ifdef ADAREG_HAVE_OPENMP
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) fn(y);
#else
  for (int y = 0; y < height; ++y) fn(y);
#endif
}

/// Sums fn(y) over rows; the partials are combined sequentially.
template <class Fn>
double sum_rows(int height, Fn&& fn) {
  std::vector<double> partial(static_cast<std::size_t>(height), 0.0);
  parallel_rows(height, [&](int y) { partial[static_cast<std::size_t>(y)] = fn(y); });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace adareg
