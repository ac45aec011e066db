#ifndef ADMMNET_RNG_HPP
#define ADMMNET_RNG_HPP

#include <cmath>
#include <cstdint>

namespace admmnet {

// Counter-based generator: each draw is a pure function of its key, so the
// evaluation order of agents within a round cannot change a stream.
namespace rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t key(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                         std::uint64_t c) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  h = splitmix64(h ^ c);
  return h;
}

/// Uniform in (0, 1).
inline double uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                      std::uint64_t c) {
  const std::uint64_t bits = key(seed, a, b, c);
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal via Box-Muller on two keyed uniforms.
inline double normal(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                     std::uint64_t c) {
  const double u1 = uniform(seed, a, b, 2 * c);
  const double u2 = uniform(seed, a, b, 2 * c + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace rng
}  // namespace admmnet

#endif
