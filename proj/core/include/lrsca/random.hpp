#pragma once

#include <cstdint>
#include <random>

#include <gmpxx.h>

namespace lrsca {

/// Seeded random source used by every generator.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The distributions are implemented here rather than taken from
/// <random> because the standard library distributions are allowed to differ
/// between implementations, and generated instances must be bit-identical
/// across platforms for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, bound) by rejection sampling. bound must be > 0.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  /// Standard normal draw (Box-Muller, one value per call).
  double normal();

  /// Nonzero standard normal draw.
  double nonzero_normal();

  /// Random rational num/den with |num| <= 10^4 and 1 <= den <= 10^4.
  mpq_class rational();

  /// As rational() but never zero.
  mpq_class nonzero_rational();

 private:
  std::mt19937_64 engine_;
};

inline constexpr std::int64_t kRationalBound = 10000;

}  // namespace lrsca
