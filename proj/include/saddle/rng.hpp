#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace saddle {

/// Counter-based SplitMix64 stream. Every draw is a pure function of
/// (seed, position), so streams are replayable, splittable by position,
/// and bit-identical across platforms. All randomness in the library
/// (matrix generation, index sampling, noise) goes through this.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed) {}

  static uint64_t value_at(uint64_t seed, uint64_t position) {
    uint64_t z = seed + (position + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  uint64_t next_u64() { return value_at(seed_, position_++); }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_uniform();
  }

  /// Standard normal via Box-Muller (two draws per pair, cached).
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_uniform();
    double u2 = next_uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  /// Uniform integer in {1, ..., n}.
  int next_index(int n) { return static_cast<int>(next_u64() % static_cast<uint64_t>(n)) + 1; }

  uint64_t position() const { return position_; }
  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  uint64_t position_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace saddle
