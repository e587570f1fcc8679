#pragma once

// Small shared utilities: deterministic RNG helpers and number formatting.

#include <charconv>
#include <cstdint>
#include <random>
#include <string>

namespace paced {

// Shortest decimal representation that round-trips to the same double.
inline std::string format_double(double x) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, ptr);
}

// SplitMix64 finalizer; derives independent substream seeds from a master seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Uniform double in [0,1) from the top 53 bits of the generator output.
// Avoids std::uniform_real_distribution, whose output is implementation
// defined; instances must be bit-identical across standard libraries.
inline double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform double in [lo, hi).
inline double next_range(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * next_unit(rng);
}

// Uniform integer in [lo, hi] via rejection-free scaling (bias negligible for
// the small ranges used here, and deterministic across platforms).
inline int next_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(next_unit(rng) * (hi - lo + 1));
}

}  // namespace paced
