#include "lrsca/random.hpp"

#include <cmath>
#include <numbers>

namespace lrsca {

std::uint64_t Rng::uniform_below(std::uint64_t bound) {
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = bound * (UINT64_MAX / bound);
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % bound;
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(uniform_below(span));
}

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  double u1 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::nonzero_normal() {
  double x = normal();
  while (x == 0.0) x = normal();
  return x;
}

mpq_class Rng::rational() {
  const long num = static_cast<long>(uniform_int(-kRationalBound, kRationalBound));
  const long den = static_cast<long>(uniform_int(1, kRationalBound));
  mpq_class q(num, static_cast<unsigned long>(den));
  q.canonicalize();
  return q;
}

mpq_class Rng::nonzero_rational() {
  mpq_class q = rational();
  while (q == 0) q = rational();
  return q;
}

}  // namespace lrsca
