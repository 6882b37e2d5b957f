#include "flatjet/parallel.hpp"

#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace flatjet {

int thread_count() {
#ifdef _OPENMP
  static const int cap = [] {
    if (const char* env = std::getenv("FLATJET_THREADS")) {
      int v = std::atoi(env);
      if (v >= 1) return v;
    }
    return omp_get_max_threads();
  }();
  return cap;
#else
  return 1;
#endif
}

}  // namespace flatjet
