#ifndef GOF_RNG_HPP_
#define GOF_RNG_HPP_

#include <cstdint>
#include <random>

// Counter-based stream splitting: every (master seed, stream id) pair
// yields an independent, reproducible generator, so parallel workers can
// be assigned work in any order without changing the results.

namespace gof {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::mt19937_64 make_stream(std::uint64_t master, std::uint64_t stream_id) {
  const std::uint64_t s = splitmix64(splitmix64(master) ^ splitmix64(~stream_id));
  return std::mt19937_64(s);
}

// Uniform draw strictly inside (0,1), 53-bit resolution.
inline double uniform01(std::mt19937_64& g) {
  return (static_cast<double>(g() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace gof

#endif  // GOF_RNG_HPP_
