#pragma once

#include <cstdint>
#include <random>

namespace contagion {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed derivation used everywhere a run needs independent streams.
///
/// Child seeds form a counter tree: the seed for stream `index` under
/// `parent` is Mix64(parent ^ Mix64(index + 1)). Replicate i of an
/// experiment uses DeriveSeed(master, i); inside a replicate the fixed
/// stream ids below split vaccination, seeding and dynamics.
constexpr std::uint64_t DeriveSeed(std::uint64_t parent, std::uint64_t index) {
  return Mix64(parent ^ Mix64(index + 1));
}

namespace stream {
inline constexpr std::uint64_t kVaccination = 101;
inline constexpr std::uint64_t kSeedInfection = 102;
inline constexpr std::uint64_t kDynamics = 103;
inline constexpr std::uint64_t kThrottlePhase = 104;
inline constexpr std::uint64_t kGraph = 105;
}  // namespace stream

inline Rng MakeRng(std::uint64_t seed) { return Rng(seed); }

}  // namespace contagion
