#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace hyplap {

// std::mt19937_64 is bit-portable; the standard distributions are not.
// These helpers keep seeded runs identical across standard libraries.
using Rng = std::mt19937_64;

// Uniform double in [0, 1).
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Uniform integer in [0, bound), rejection sampling. bound must be > 0.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw = rng();
  while (draw >= limit) draw = rng();
  return draw % bound;
}

}  // namespace hyplap
