#pragma once

#include <cstdint>

namespace curvflow {

/// SplitMix64: 64-bit state, identical output on every platform.
///
/// The standard <random> distributions are implementation-defined, so the
/// conversions to doubles live here as well; seeded experiments must be
/// bit-reproducible across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept;

  /// Uniform in [0, 1) with 53 bits of mantissa.
  double uniform() noexcept;

  /// Uniform in [lo, hi].
  double uniform(double lo, double hi) noexcept;

  /// Independent child stream; same (seed, index) always gives the same child.
  Rng split(std::uint64_t index) const noexcept;

 private:
  std::uint64_t state_;
};

/// Seed for run `index` of a batch started from `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

}  // namespace curvflow
