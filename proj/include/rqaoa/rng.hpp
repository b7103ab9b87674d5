/*
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of the license in the LICENSE.txt file in the root directory of this
 * source tree or at http://www.apache.org/licenses/LICENSE-2.0
 */

// Seedable pseudo-random number generator used everywhere randomness is
// needed (graph generation, local-search restarts, random statevectors).
//
// The generator is SplitMix64: a 64-bit counter advanced by the golden-ratio
// increment and passed through a two-round shift-xor-multiply finalizer. It
// is pinned here (rather than std::mt19937) so that every seed-dependent
// value in reports and tests is reproducible from the three lines of the
// finalizer alone, on any platform. Bounded draws use masked rejection, so
// results do not depend on platform division behavior either.

#pragma once

#include <cstdint>
#include <stdexcept>

namespace rqaoa {

class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  // Next raw 64-bit value.
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1), 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound) via masked rejection; bound >= 1.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("SplitMix64::next_below: bound must be >= 1");
    std::uint64_t mask = bound - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    for (;;) {
      std::uint64_t v = next() & mask;
      if (v < bound) return v;
    }
  }

  // Uniform integer in [lo, hi] inclusive.
  std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw std::invalid_argument("SplitMix64::next_int: lo > hi");
    return lo + static_cast<std::int64_t>(next_below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  // A fair coin as +1 / -1.
  int next_sign() { return (next() >> 63) ? -1 : 1; }

  // Derive an independent child generator for stream index `stream`.
  // The child seed is finalizer(state ^ golden*(stream+1)); documented so
  // recorded per-row seeds can be reproduced externally.
  SplitMix64 split(std::uint64_t stream) const {
    return SplitMix64(mix(state_ ^ (0x9e3779b97f4a7c15ULL * (stream + 1))));
  }

  // Seed value a child created by split(stream) would start from.
  std::uint64_t split_seed(std::uint64_t stream) const {
    return mix(state_ ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
  }

  // UniformRandomBitGenerator interface.
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~0ULL; }
  std::uint64_t operator()() { return next(); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace rqaoa
