#pragma once

#include <cstdint>

namespace ffc {

/// Counter-based generator: every draw is a pure function of (seed, counter),
/// so results do not depend on evaluation order or thread count.
///
/// Algorithm identifier: "splitmix64-ctr/box-muller-v1".
///   bits(seed, i)   = splitmix64_mix(seed + (i + 1) * 0x9E3779B97F4A7C15)
///   uniform(seed,i) = ((bits >> 11) + 1) * 2^-53           in (0, 1]
///   normal(seed,i)  = sqrt(-2 ln uniform(seed, 2i)) * cos(2 pi uniform(seed, 2i+1))
class CounterRng {
 public:
  static constexpr const char* kAlgorithm = "splitmix64-ctr/box-muller-v1";

  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t counter) const;
  double uniform(std::uint64_t counter) const;
  double normal(std::uint64_t counter) const;

 private:
  std::uint64_t seed_;
};

}  // namespace ffc
