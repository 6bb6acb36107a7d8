#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace iepg {

/// Deterministic random source. Wraps mt19937_64 but maps its raw output to
/// doubles and bounded ints by hand, so identical seeds give identical draws
/// on every platform (std::uniform_*_distribution is implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t bits() { return gen_(); }

  /// Uniform double in [0, 1), 53 random mantissa bits.
  double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("Rng::uniform: empty interval");
    return lo + (hi - lo) * uniform();
  }

  /// Uniform integer in [lo, hi], inclusive. Rejection sampling, no modulo bias.
  int uniform_int(int lo, int hi) {
    if (lo > hi) throw std::invalid_argument("Rng::uniform_int: empty range");
    const std::uint64_t range = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t x = bits();
    while (x >= limit) x = bits();
    return lo + static_cast<int>(x % range);
  }

  /// +1.0 or -1.0 with equal probability.
  double sign() { return (bits() & 1u) ? 1.0 : -1.0; }

  /// Random magnitude in [min_mag, 1] with random sign. Used to draw vector
  /// entries that must stay safely away from zero.
  double nonzero(double min_mag = 0.25) { return sign() * uniform(min_mag, 1.0); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace iepg
