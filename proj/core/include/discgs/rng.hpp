#pragma once

#include <cstdint>
#include <random>

namespace discgs {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; a bijective avalanche mix of 64 bits.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of worker `worker`'s stream at global iteration `iteration`. Depends
/// only on its arguments, never on thread scheduling.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t worker,
                                    std::uint64_t iteration) noexcept {
  return mix64(mix64(mix64(seed) ^ (worker + 1)) ^ (iteration + 1));
}

/// Uniform draw in [0, 1) from the top 53 bits of one engine output.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace discgs
