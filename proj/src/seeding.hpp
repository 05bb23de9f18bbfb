#pragma once

#include <cstdint>
#include <vector>

#include "sdph/rng.hpp"

namespace sdph::detail {

// k-means++ D^2 seeding over n rows of dimension d accessed through
// `row(i)` returning const double*. Returns k distinct row indices.
template <typename RowFn>
std::vector<std::size_t> kmeanspp_indices(std::size_t n, std::size_t d,
                                          RowFn row, int k, Rng& rng) {
  std::vector<std::size_t> chosen;
  chosen.reserve(k);
  chosen.push_back(rng.index(n));
  std::vector<double> dist2(n);
  auto sqdist = [&](std::size_t a, std::size_t b) {
    const double* pa = row(a);
    const double* pb = row(b);
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = pa[j] - pb[j];
      s += diff * diff;
    }
    return s;
  };
  for (std::size_t i = 0; i < n; ++i) dist2[i] = sqdist(i, chosen[0]);
  while (static_cast<int>(chosen.size()) < k) {
    double total = 0.0;
    for (double v : dist2) total += v;
    std::size_t pick;
    if (total <= 0.0) {
      pick = rng.index(n);  // all remaining points coincide with a seed
    } else {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += dist2[i];
        if (acc > target) {
          pick = i;
          break;
        }
      }
    }
    chosen.push_back(pick);
    for (std::size_t i = 0; i < n; ++i)
      dist2[i] = std::min(dist2[i], sqdist(i, pick));
  }
  return chosen;
}

}  // namespace sdph::detail
