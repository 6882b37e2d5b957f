#pragma once

#include <cstdint>

namespace flatjet {

enum class Exec { serial, parallel };

// Worker cap for the parallel policy: FLATJET_THREADS when set (>=1),
// otherwise the OpenMP default. Without OpenMP both policies run serially.
int thread_count();

// Largest value of f(i) for i in [0, count). f must be pure; results are
// identical for both policies because fp max is order-independent.
template <class F>
double max_over(std::int64_t count, Exec exec, F&& f);

// Smallest value, same contract.
template <class F>
double min_over(std::int64_t count, Exec exec, F&& f);

}  // namespace flatjet

#ifdef _OPENMP
#include <omp.h>
#endif

namespace flatjet {

template <class F>
double max_over(std::int64_t count, Exec exec, F&& f) {
  double best = -1.0 / 0.0;
#ifdef _OPENMP
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static) reduction(max : best) num_threads(thread_count())
    for (std::int64_t i = 0; i < count; ++i) {
      double v = f(i);
      if (v > best) best = v;
    }
    return best;
  }
#else
  (void)exec;
#endif
  for (std::int64_t i = 0; i < count; ++i) {
    double v = f(i);
    if (v > best) best = v;
  }
  return best;
}

template <class F>
double min_over(std::int64_t count, Exec exec, F&& f) {
  return -max_over(count, exec, [&f](std::int64_t i) { return -f(i); });
}

}  // namespace flatjet
