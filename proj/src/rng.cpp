#include "curvflow/rng.hpp"

namespace curvflow {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace

std::uint64_t Rng::next() noexcept {
  state_ += kGolden;
  return mix(state_);
}

double Rng::uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

Rng Rng::split(std::uint64_t index) const noexcept {
  return Rng(mix(state_ ^ mix(index + kGolden)));
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix(mix(master) + (index + 1) * kGolden);
}

}  // namespace curvflow
