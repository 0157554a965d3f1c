#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace apgm {

/// SplitMix64: a counter-based 64-bit generator.
///
/// State update: state += 0x9E3779B97F4A7C15 (mod 2^64).
/// Output: z = state; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
///         z = (z ^ (z >> 27)) * 0x94D049BB133111EB; return z ^ (z >> 31).
/// The i-th output (1-based) is a pure function of seed + i * increment,
/// so streams are reproducible bit for bit on any platform.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Top 53 bits scaled into [0, 1).
  double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Affine map of uniform() onto [lo, hi].
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; consumes two uniforms per pair and
  /// returns the cosine branch first, then the sine branch.
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace apgm
