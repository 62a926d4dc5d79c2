#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lrsca/model.hpp"
#include "lrsca/random.hpp"

namespace lrsca {

inline constexpr std::size_t kMaxGenerationRetries = 100;

/// Parameters of a planted instance. ambient_dim = 0 means p = r.
struct GenSpec {
  std::size_t r = 3;
  std::size_t k = 2;
  std::vector<std::size_t> points_per_hyperplane;
  std::uint64_t seed = 0;
  std::size_t ambient_dim = 0;
};

template <Scalar T>
struct PlantedInstance {
  Instance<T> instance;
  Decomposition<T> truth;
  /// Columns planted on each hyperplane, in generation order.
  std::vector<std::vector<std::size_t>> index_sets;
  std::size_t attempts = 1;
};

template <Scalar T>
struct Counterexample {
  Instance<T> instance;
  Decomposition<T> first;
  Decomposition<T> second;
  std::size_t attempts = 1;
};

/// Scalar draw matching the backend: standard normal for double, bounded
/// random rational (see Rng::rational) for Rational.
template <Scalar T>
T draw_scalar(Rng& rng);
template <Scalar T>
T draw_nonzero_scalar(Rng& rng);
template <Scalar T>
Matrix<T> draw_matrix(Rng& rng, std::size_t rows, std::size_t cols);

/// Random dictionary; for every hyperplane j emits points_per_hyperplane[j]
/// columns whose coefficient vector vanishes at j and at r-k-1 further
/// uniformly chosen positions. Each attempt is checked (validate passes and
/// spark(M(:, I_j)) = r whenever |I_j| >= r-1) and redrawn on failure.
/// Throws Errc::invalid_params on a malformed spec, Errc::retry_exhausted
/// after kMaxGenerationRetries failed attempts.
template <Scalar T>
PlantedInstance<T> planted_instance(const GenSpec& spec, const Tolerance& tol = default_tolerance<T>());

/// Two random dictionaries and r-2 random points on each of the r^2
/// intersections of a hyperplane of one with a hyperplane of the other
/// (k = r-1, n = r^3 - 2r^2). Every almost-sure property of the construction
/// is verified and the draw repeated on failure. Throws Errc::invalid_r for
/// r < 3, Errc::retry_exhausted.
template <Scalar T>
Counterexample<T> counterexample(std::size_t r, std::uint64_t seed, const Tolerance& tol = default_tolerance<T>());

/// (r-j+1)(r-2)+1 points on hyperplane j for j = 1..r.
std::vector<std::size_t> staircase_counts(std::size_t r);

/// Planted instance with k = r-1 and staircase_counts(r). Throws
/// Errc::invalid_r for r < 3.
template <Scalar T>
PlantedInstance<T> staircase_instance(std::size_t r, std::uint64_t seed, const Tolerance& tol = default_tolerance<T>());

}  // namespace lrsca
