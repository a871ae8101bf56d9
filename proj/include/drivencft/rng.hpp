#pragma once

#include <cstdint>

namespace drivencft {

// Stateless counter-based mixer (splitmix64 finalizer over seed + gamma*(i+1)).
// Deterministic by construction: the value depends only on (seed, i), so any
// thread can evaluate any index with no shared state.
inline std::uint64_t mix(std::uint64_t seed, std::uint64_t i) {
  std::uint64_t z = seed + (i + 1) * 0x9E3779B97F4A7C15ULL;
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

// Fair coin for index i: the top bit of the mixed word. Letter 0 selects the
// first step of a two-step protocol, letter 1 the second.
inline int coinLetter(std::uint64_t seed, std::uint64_t i) {
  return static_cast<int>(mix(seed, i) >> 63);
}

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(std::uint64_t seed, std::uint64_t i) {
  return static_cast<double>(mix(seed, i) >> 11) * 0x1.0p-53;
}

}  // namespace drivencft
