#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>

namespace rrambb {

/// xoshiro256** engine seeded through SplitMix64.
///
/// Satisfies UniformRandomBitGenerator so it plugs into <random>
/// distributions. Small state makes it cheap to spin up one stream per
/// crossbar cell, which is how programming stays order-independent.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0);

  /// Deterministic child stream addressed by `keys` under `base`.
  static Rng substream(std::uint64_t base, std::initializer_list<std::uint64_t> keys);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on [0, 1).
  double uniform();
  /// Standard normal.
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  /// Draws a 64-bit value intended as the base of a family of substreams.
  std::uint64_t fork_seed() { return (*this)(); }

 private:
  std::uint64_t s_[4];
  std::normal_distribution<double> gauss_{0.0, 1.0};
};

/// SplitMix64 finalizer; exposed for deriving seeds from tuples.
std::uint64_t mix64(std::uint64_t x);

}  // namespace rrambb
