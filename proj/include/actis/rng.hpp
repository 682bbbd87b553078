#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace actis::rng {

// Counter-based generator: every draw is a pure function of (seed, counters),
// so results do not depend on evaluation order or worker count.

inline std::uint64_t mix(std::uint64_t z) {
  // splitmix64 finalizer
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

inline std::uint64_t hash(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0) {
  std::uint64_t h = seed + 0x9e3779b97f4a7c15ULL;
  h = mix(h ^ a);
  h = mix(h + 0x9e3779b97f4a7c15ULL + b);
  h = mix(h + 0x3c6ef372fe94f82bULL + c);
  return h;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                        std::uint64_t c = 0) {
  return static_cast<double>(hash(seed, a, b, c) >> 11) * 0x1.0p-53;
}

inline double uniform(double lo, double hi, std::uint64_t seed, std::uint64_t a,
                      std::uint64_t b = 0, std::uint64_t c = 0) {
  return lo + (hi - lo) * uniform01(seed, a, b, c);
}

/// Pair of independent standard normals (Box-Muller).
inline std::pair<double, double> normal_pair(std::uint64_t seed, std::uint64_t a,
                                             std::uint64_t b = 0, std::uint64_t c = 0) {
  double u1 = uniform01(seed, a, b, c * 2);
  double u2 = uniform01(seed, a, b, c * 2 + 1);
  if (u1 <= 0.0) u1 = 0x1.0p-53;  // log guard
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

}  // namespace actis::rng
