#pragma once

// Counter-based deterministic random streams: every (seed, index) pair owns
// an independent SplitMix64 sequence, so results never depend on scheduling.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace atiyah {

class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t index)
      : state_(mix(seed * 0x9E3779B97F4A7C15ULL + mix(index + 0x632BE59BD9B4E019ULL))) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double gaussian() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace atiyah
