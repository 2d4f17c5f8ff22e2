#pragma once

#include <cmath>
#include <cstdint>

namespace socil::detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Standard-normal draw, a pure function of the counter tuple (Box-Muller).
inline double counter_normal(std::uint64_t seed, std::uint64_t a,
                             std::uint64_t b) {
  const std::uint64_t key = splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
  const double u1 = (static_cast<double>(key >> 11) + 1.0) * 0x1.0p-53;
  const double u2 =
      static_cast<double>(splitmix64(key ^ 0x5851F42D4C957F2DULL) >> 11) *
      0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

/// Uniform draw in [lo, hi), a pure function of the counter tuple.
inline double counter_uniform(std::uint64_t seed, std::uint64_t a,
                              std::uint64_t b, double lo, double hi) {
  const std::uint64_t key = splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
  const double u = static_cast<double>(key >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

}  // namespace socil::detail
