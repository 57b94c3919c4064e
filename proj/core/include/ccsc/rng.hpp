#pragma once

#include <cstdint>
#include <random>

namespace ccsc {

/// splitmix64 step; used to decorrelate user seeds and stream indices.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Derives an independent stream seed from (seed, stream). Generation over
/// many traces uses one stream per trace so the work can be split across
/// threads without changing the result.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x517CC1B727220A95ull));
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return std::mt19937_64{stream_seed(seed, stream)};
}

}  // namespace ccsc
