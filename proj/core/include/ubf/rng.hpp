#pragma once

#include <cstdint>

namespace ubf {

// SplitMix64. The synthetic-scene contract promises identical scenes for
// identical seeds on every platform, so all randomness goes through this
// fixed-constant generator instead of implementation-defined std
// distributions.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1): top 53 bits scaled by 2^-53.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [0, n) by modulo; bias is < n/2^64, irrelevant at our scales.
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  // Uniform in [lo, hi).
  double next_range(double lo, double hi) { return lo + (hi - lo) * next_double(); }

 private:
  std::uint64_t state_;
};

}  // namespace ubf
