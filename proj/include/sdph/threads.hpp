#pragma once

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sdph {

// Number of threads parallel kernels may use. SDPH_THREADS caps it; the
// kernels themselves are written so results do not depend on this value.
inline int effective_threads() {
#ifdef _OPENMP
  int n = omp_get_max_threads();
#else
  int n = 1;
#endif
  if (const char* env = std::getenv("SDPH_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1 && cap < n) n = cap;
    } catch (...) {
      // ignore malformed values
    }
  }
  return n;
}

}  // namespace sdph
