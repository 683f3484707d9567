#pragma once

#include <cstdint>
#include <random>

namespace wasslab::rng {

using Engine = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Independent stream for replica `index` of a run seeded with `seed`.
///
/// Streams depend only on (seed, index), so a Monte Carlo loop produces the
/// same draws for sample i regardless of how samples are split across
/// threads, and two estimators sharing (seed, index) see common random
/// numbers.
inline Engine stream(std::uint64_t seed, std::uint64_t index) {
  return Engine(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL)));
}

/// Derives a child seed, e.g. to give two routes of a comparison
/// independent noise.
constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t salt) {
  return splitmix64(seed ^ splitmix64(salt));
}

}  // namespace wasslab::rng
