#pragma once
// Deterministic random utilities shared by generators, training, and the bench
// driver. std::mt19937_64 has a standard-mandated output sequence; the helpers
// below replace the <random> distributions, whose results are not portable
// across standard library implementations.

#include <cmath>
#include <cstdint>
#include <random>

namespace live {

using rng_t = std::mt19937_64;

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Independent stream for (seed, stream). Used to derive per-query and
// per-epoch sub-streams from one user-facing seed.
inline rng_t make_rng(uint64_t seed, uint64_t stream = 0) {
  return rng_t(splitmix64(splitmix64(seed) ^ (0x517cc1b727220a95ull * (stream + 1))));
}

// uniform double in [0, 1), 53 bits
inline double uniform01(rng_t& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// unbiased uniform integer in [0, n), n > 0
inline uint64_t uniform_below(rng_t& g, uint64_t n) {
  const uint64_t lim = ~uint64_t{0} - ~uint64_t{0} % n;
  uint64_t x;
  do {
    x = g();
  } while (x >= lim);
  return x % n;
}

inline double uniform_range(rng_t& g, double lo, double hi) {
  return lo + (hi - lo) * uniform01(g);
}

// standard normal via Box-Muller
inline double gaussian(rng_t& g) {
  constexpr double two_pi = 6.283185307179586;
  double u1;
  do {
    u1 = uniform01(g);
  } while (u1 <= 0.0);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * uniform01(g));
}

}  // namespace live
