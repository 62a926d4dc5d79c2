#include "lrsca/generate.hpp"

#include <limits>
#include <numeric>
#include <optional>

namespace lrsca {

template <Scalar T>
T draw_scalar(Rng& rng) {
  if constexpr (std::same_as<T, Rational>) {
    return rng.rational();
  } else {
    return rng.normal();
  }
}

template <Scalar T>
T draw_nonzero_scalar(Rng& rng) {
  if constexpr (std::same_as<T, Rational>) {
    return rng.nonzero_rational();
  } else {
    return rng.nonzero_normal();
  }
}

template <Scalar T>
Matrix<T> draw_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix<T> m(rows, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = draw_scalar<T>(rng);
  return m;
}

namespace {

constexpr SparkOptions kUnboundedSpark{std::numeric_limits<std::size_t>::max()};

// ell-1 further zero positions drawn uniformly from {0..r-1} \ {j} by a
// partial Fisher-Yates shuffle.
std::vector<std::size_t> zero_positions(Rng& rng, std::size_t r, std::size_t j, std::size_t ell) {
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < r; ++i)
    if (i != j) pool.push_back(i);
  std::vector<std::size_t> zeros{j};
  for (std::size_t t = 0; t + 1 < ell; ++t) {
    const auto pick = t + static_cast<std::size_t>(rng.uniform_below(pool.size() - t));
    std::swap(pool[t], pool[pick]);
    zeros.push_back(pool[t]);
  }
  return zeros;
}

template <Scalar T>
bool has_spark_r(const Matrix<T>& points, std::size_t r, const Tolerance& tol) {
  return spark(points, tol, kUnboundedSpark) == r;
}

void check_spec(const GenSpec& spec) {
  if (spec.r < 2) throw Error(Errc::invalid_params, "planted instances need r >= 2");
  if (spec.k < 1 || spec.k >= spec.r) throw Error(Errc::invalid_params, "planted instances need 1 <= k <= r-1");
  if (spec.points_per_hyperplane.size() != spec.r) {
    throw Error(Errc::invalid_params, "points_per_hyperplane must list r counts");
  }
  for (auto c : spec.points_per_hyperplane)
    if (c == 0) throw Error(Errc::invalid_params, "point counts must be positive");
  if (spec.ambient_dim != 0 && spec.ambient_dim < spec.r) throw Error(Errc::invalid_params, "ambient dimension below r");
}

template <Scalar T>
std::optional<PlantedInstance<T>> planted_attempt(const GenSpec& spec, Rng& rng, const Tolerance& tol) {
  const std::size_t r = spec.r;
  const std::size_t p = spec.ambient_dim == 0 ? r : spec.ambient_dim;
  const std::size_t ell = r - spec.k;
  const std::size_t n = std::accumulate(spec.points_per_hyperplane.begin(), spec.points_per_hyperplane.end(), std::size_t{0});

  Matrix<T> d = draw_matrix<T>(rng, p, r);
  Matrix<T> b(r, n);
  std::vector<std::vector<std::size_t>> index_sets(r);
  std::size_t col = 0;
  for (std::size_t j = 0; j < r; ++j) {
    for (std::size_t c = 0; c < spec.points_per_hyperplane[j]; ++c, ++col) {
      std::vector<bool> zero(r, false);
      for (auto z : zero_positions(rng, r, j, ell)) zero[z] = true;
      for (std::size_t i = 0; i < r; ++i)
        if (!zero[i]) b(i, col) = draw_nonzero_scalar<T>(rng);
      index_sets[j].push_back(col);
    }
  }
  if (rank(d, tol) != r) return std::nullopt;

  Instance<T> inst(d * b, r, spec.k);
  Decomposition<T> dec{std::move(d), std::move(b)};
  if (!validate(inst, dec, tol).passed()) return std::nullopt;
  for (std::size_t j = 0; j < r; ++j) {
    if (index_sets[j].size() + 1 < r) continue;
    if (!has_spark_r(inst.data().select_columns(index_sets[j]), r, tol)) return std::nullopt;
  }
  return PlantedInstance<T>{std::move(inst), std::move(dec), std::move(index_sets), 1};
}

template <Scalar T>
std::optional<Counterexample<T>> counterexample_attempt(std::size_t r, Rng& rng, const Tolerance& tol) {
  Matrix<T> d1 = draw_matrix<T>(rng, r, r);
  Matrix<T> d2 = draw_matrix<T>(rng, r, r);
  if (rank(d1, tol) != r || rank(d2, tol) != r) return std::nullopt;
  const auto f1 = hyperplanes_of(d1, tol);
  const auto f2 = hyperplanes_of(d2, tol);

  std::vector<const Subspace<T>*> all;
  for (const auto& f : f1) all.push_back(&f);
  for (const auto& f : f2) all.push_back(&f);
  for (std::size_t a = 0; a < all.size(); ++a)
    for (std::size_t c = a + 1; c < all.size(); ++c)
      if (same_subspace(*all[a], *all[c], tol)) return std::nullopt;

  const std::size_t per = r - 2;
  Matrix<T> m(r, r * r * per);
  std::size_t col = 0;
  for (std::size_t j = 0; j < r; ++j) {
    for (std::size_t l = 0; l < r; ++l) {
      const Subspace<T> meet = intersect(f1[j], f2[l], tol);
      if (meet.dim() != per) return std::nullopt;
      for (std::size_t t = 0; t < per; ++t, ++col) {
        for (std::size_t w = 0; w < per; ++w) {
          const T weight = draw_scalar<T>(rng);
          for (std::size_t i = 0; i < r; ++i) m(i, col) += weight * meet.basis()(i, w);
        }
      }
    }
  }

  Instance<T> inst(std::move(m), r, r - 1);
  Matrix<T> b1;
  Matrix<T> b2;
  try {
    b1 = solve_coefficients(d1, inst.data(), tol);
    b2 = solve_coefficients(d2, inst.data(), tol);
  } catch (const Error&) {
    return std::nullopt;
  }
  Decomposition<T> first{std::move(d1), std::move(b1)};
  Decomposition<T> second{std::move(d2), std::move(b2)};
  if (!validate(inst, first, tol).passed() || !validate(inst, second, tol).passed()) return std::nullopt;

  const std::size_t expected = r * per;
  for (const auto* dec : {&first, &second}) {
    const MembershipMatrix z = membership(inst, dec->D, tol);
    for (std::size_t j = 0; j < r; ++j) {
      const auto idx = z.index_set(j);
      if (idx.size() != expected) return std::nullopt;
      if (!has_spark_r(inst.data().select_columns(idx), r, tol)) return std::nullopt;
    }
  }
  if (essentially_equal(first.D, second.D, tol)) return std::nullopt;
  return Counterexample<T>{std::move(inst), std::move(first), std::move(second), 1};
}

}  // namespace

template <Scalar T>
PlantedInstance<T> planted_instance(const GenSpec& spec, const Tolerance& tol) {
  check_spec(spec);
  Rng rng(spec.seed);
  for (std::size_t attempt = 1; attempt <= kMaxGenerationRetries; ++attempt) {
    if (auto out = planted_attempt<T>(spec, rng, tol)) {
      out->attempts = attempt;
      return std::move(*out);
    }
  }
  throw Error(Errc::retry_exhausted, "planted instance failed verification " + std::to_string(kMaxGenerationRetries) +
                                         " times");
}

template <Scalar T>
Counterexample<T> counterexample(std::size_t r, std::uint64_t seed, const Tolerance& tol) {
  if (r < 3) throw Error(Errc::invalid_r, "the counterexample construction needs r >= 3");
  Rng rng(seed);
  for (std::size_t attempt = 1; attempt <= kMaxGenerationRetries; ++attempt) {
    if (auto out = counterexample_attempt<T>(r, rng, tol)) {
      out->attempts = attempt;
      return std::move(*out);
    }
  }
  throw Error(Errc::retry_exhausted, "counterexample failed verification " + std::to_string(kMaxGenerationRetries) +
                                         " times");
}

std::vector<std::size_t> staircase_counts(std::size_t r) {
  std::vector<std::size_t> counts;
  for (std::size_t j = 1; j <= r; ++j) counts.push_back((r - j + 1) * (r - 2) + 1);
  return counts;
}

template <Scalar T>
PlantedInstance<T> staircase_instance(std::size_t r, std::uint64_t seed, const Tolerance& tol) {
  if (r < 3) throw Error(Errc::invalid_r, "staircase instances need r >= 3");
  return planted_instance<T>(GenSpec{r, r - 1, staircase_counts(r), seed, 0}, tol);
}

#define LRSCA_INSTANTIATE(T)                                                                        \
  template T draw_scalar<T>(Rng&);                                                                  \
  template T draw_nonzero_scalar<T>(Rng&);                                                          \
  template Matrix<T> draw_matrix<T>(Rng&, std::size_t, std::size_t);                                \
  template PlantedInstance<T> planted_instance<T>(const GenSpec&, const Tolerance&);                \
  template Counterexample<T> counterexample<T>(std::size_t, std::uint64_t, const Tolerance&);       \
  template PlantedInstance<T> staircase_instance<T>(std::size_t, std::uint64_t, const Tolerance&);

LRSCA_INSTANTIATE(Rational)
LRSCA_INSTANTIATE(double)

#undef LRSCA_INSTANTIATE

}  // namespace lrsca
