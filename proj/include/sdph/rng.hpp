#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace sdph {

// splitmix64; used both as a stream-splitting hash and to seed mt19937_64.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic child seed for a named parallel stream. Results are
// independent of scheduling because every replicate derives its own seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64(s);
  s ^= stream * 0x9e3779b97f4a7c15ULL + 0x165667b19e3779f9ULL;
  return a ^ splitmix64(s);
}

// mt19937_64 with portable floating-point draws (std::uniform_real_distribution
// is implementation-defined; these are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t bits() { return gen_(); }

  // Uniform in [0, 1), 53-bit mantissa.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Uniform integer in [0, n), n >= 1.
  std::uint64_t index(std::uint64_t n) {
    // Rejection sampling to avoid modulo bias.
    const std::uint64_t limit = ~0ULL - ~0ULL % n;
    std::uint64_t v;
    do {
      v = gen_();
    } while (v >= limit);
    return v % n;
  }

  // Standard normal via Box-Muller (no cached spare, so the draw count per
  // call is fixed and streams stay reproducible).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace sdph
