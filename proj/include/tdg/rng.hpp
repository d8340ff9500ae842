#pragma once

#include "tdg/geometry.hpp"

#include <cstdint>

namespace tdg {

/// splitmix64 step: the only primitive used for random numbers, so streams
/// are identical across platforms and standard-library versions.
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives an independent per-trial seed from (master seed, trial index) by
/// running splitmix64 on their combination; trials can then run in any order
/// or in parallel with identical results.
inline uint64_t trial_seed(uint64_t master_seed, uint64_t trial_index) {
  uint64_t s = master_seed ^ (0x9e3779b97f4a7c15ULL * (trial_index + 1));
  uint64_t a = splitmix64(s);
  uint64_t b = splitmix64(s);
  return a ^ (b << 1);
}

/// Per-trial random stream. One uniform draw per intruder arrival.
struct TrialRng {
  uint64_t state;

  explicit TrialRng(uint64_t seed) : state(seed) {}

  uint64_t next_u64() { return splitmix64(state); }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform01() { return (next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform arrival angle in (-pi, pi].
  double uniform_angle() { return kPi - 2.0 * kPi * uniform01(); }
};

} // namespace tdg
