#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "helpers.hpp"
#include "lrsca/certify.hpp"
#include "lrsca/generate.hpp"
#include "lrsca/oracle.hpp"
#include "lrsca/recover.hpp"

// Randomized property suites. Each returns the number of violated cases so
// the unit tests and the acceptance binary can share them.
namespace testing {

struct SuiteResult {
  std::size_t cases = 0;
  std::size_t violations = 0;
  // Cases where the premise of an implication held (guards against vacuity).
  std::size_t premises = 0;
};

inline const lrsca::Tolerance& exact_tol() {
  static const lrsca::Tolerance tol = lrsca::Tolerance::exact();
  return tol;
}

inline std::vector<std::size_t> random_permutation(lrsca::Rng& rng, std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng.uniform_below(i)]);
  return p;
}

inline Matrix<Q> permute_and_scale(lrsca::Rng& rng, const Matrix<Q>& m) {
  const auto perm = random_permutation(rng, m.cols());
  Matrix<Q> out = m.select_columns(perm);
  for (std::size_t j = 0; j < out.cols(); ++j) {
    Q s = frac(rng.uniform_int(1, 5), rng.uniform_int(1, 5));
    if (rng.uniform_below(2)) s = -s;
    for (std::size_t i = 0; i < out.rows(); ++i) out(i, j) *= s;
  }
  return out;
}

// Random instance with a known dictionary: every column gets at least r-k
// zeros, sometimes one more, and the first zero is drawn from a skewed
// distribution so that some hyperplanes are crowded and others sparse.
struct StructuredCase {
  lrsca::Instance<Q> instance;
  Matrix<Q> D;
};

inline StructuredCase structured_case(lrsca::Rng& rng, std::size_t r, std::size_t k, std::size_t n) {
  const Matrix<Q> d = lrsca::draw_matrix<Q>(rng, r, r);
  Matrix<Q> b(r, n);
  std::vector<std::size_t> weights(r);
  for (auto& w : weights) w = 1 + rng.uniform_below(4);
  const std::size_t total = std::accumulate(weights.begin(), weights.end(), std::size_t{0});
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t pick = rng.uniform_below(total);
    std::size_t first = 0;
    while (pick >= weights[first]) pick -= weights[first++];
    std::vector<bool> zero(r, false);
    zero[first] = true;
    std::size_t zeros = r - k + (rng.uniform_below(5) == 0 ? 1 : 0);
    zeros = std::min(zeros, r - 1);
    for (std::size_t placed = 1; placed < zeros;) {
      const auto q = rng.uniform_below(r);
      if (!zero[q]) {
        zero[q] = true;
        ++placed;
      }
    }
    for (std::size_t q = 0; q < r; ++q)
      if (!zero[q]) b(q, i) = frac(rng.uniform_int(1, 9) * (rng.uniform_below(2) ? 1 : -1), rng.uniform_int(1, 4));
  }
  return {lrsca::Instance<Q>(d * b, r, k), d};
}

inline bool listed(const lrsca::OracleResult<Q>& res, const Matrix<Q>& d) {
  for (const auto& dec : res.decompositions)
    if (lrsca::essentially_equal(dec.D, d, exact_tol())) return true;
  return false;
}

// spark agrees with the bitmask oracle and is unchanged by column
// permutation, nonzero column scaling and invertible left multiplication.
inline SuiteResult spark_invariance_suite(std::size_t cases, std::uint64_t seed) {
  lrsca::Rng rng(seed);
  SuiteResult res;
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t rows = 2 + rng.uniform_below(3);
    const std::size_t cols = 2 + rng.uniform_below(6);
    Matrix<Q> m = random_qmat(rng, rows, cols, 2);
    const auto expected = naive_spark(m);
    const auto base = lrsca::spark(m, exact_tol());
    const auto moved = lrsca::spark(permute_and_scale(rng, m), exact_tol());
    const auto mixed = lrsca::spark(random_invertible(rng, rows) * m, exact_tol());
    ++res.cases;
    if (base != expected || moved != expected || mixed != expected) ++res.violations;
  }
  return res;
}

// Reflexive, symmetric and transitive, with witnesses that reproduce the
// dictionaries they relate.
inline SuiteResult equivalence_suite(std::size_t cases, std::uint64_t seed) {
  using lrsca::apply_witness;
  using lrsca::essentially_equal;
  lrsca::Rng rng(seed);
  SuiteResult res;
  const auto& tol = exact_tol();
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t r = 2 + rng.uniform_below(4);
    const std::size_t p = r + rng.uniform_below(3);
    const Matrix<Q> d = lrsca::draw_matrix<Q>(rng, p, r);
    const Matrix<Q> d2 = permute_and_scale(rng, d);
    const Matrix<Q> d3 = permute_and_scale(rng, d2);
    const Matrix<Q> e = lrsca::draw_matrix<Q>(rng, p, r);
    bool ok = true;

    const auto self = essentially_equal(d, d, tol);
    ok = ok && self && apply_witness(d, *self) == d;
    for (std::size_t i = 0; ok && i < r; ++i) ok = self->permutation[i] == i && self->scales[i] == 1;

    const auto w12 = essentially_equal(d, d2, tol);
    const auto w21 = essentially_equal(d2, d, tol);
    ok = ok && w12 && w21 && apply_witness(d2, *w12) == d && apply_witness(d, *w21) == d2;

    const auto w23 = essentially_equal(d2, d3, tol);
    const auto w13 = essentially_equal(d, d3, tol);
    ok = ok && w23 && w13 && apply_witness(d3, *w13) == d;
    if (ok) ok = apply_witness(apply_witness(d3, *w23), *w12) == d;

    ok = ok && essentially_equal(d, e, tol).has_value() == essentially_equal(e, d, tol).has_value();
    ok = ok && essentially_equal(d3, e, tol).has_value() == essentially_equal(d, e, tol).has_value();
    ++res.cases;
    if (!ok) ++res.violations;
  }
  return res;
}

// hyperplanes_of and dictionary_from_hyperplanes invert each other up to
// essential equivalence of dictionaries and set equality of arrangements.
inline SuiteResult round_trip_suite(std::size_t cases, std::uint64_t seed) {
  lrsca::Rng rng(seed);
  SuiteResult res;
  const auto& tol = exact_tol();
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t r = 2 + rng.uniform_below(4);
    const std::size_t p = r + rng.uniform_below(3);
    const Matrix<Q> d = lrsca::draw_matrix<Q>(rng, p, r);
    const auto fs = lrsca::hyperplanes_of(d, tol);
    auto shuffled = fs;
    const auto perm = random_permutation(rng, r);
    for (std::size_t i = 0; i < r; ++i) shuffled[i] = fs[perm[i]];
    const auto back = lrsca::dictionary_from_hyperplanes(shuffled, tol);
    bool ok = lrsca::essentially_equal(back, d, tol).has_value();
    const auto again = lrsca::hyperplanes_of(back, tol);
    for (const auto& f : fs) {
      std::size_t hits = 0;
      for (const auto& g : again) hits += lrsca::same_subspace(f, g, tol);
      ok = ok && hits == 1;
    }
    ++res.cases;
    if (!ok) ++res.violations;
  }
  return res;
}

// thm1 implies seq; at k = r-1 the pruned sequential test and the corollary
// test agree on every ordering.
inline SuiteResult dominance_suite(std::size_t cases, std::uint64_t seed) {
  lrsca::Rng rng(seed);
  SuiteResult res;
  const auto& tol = exact_tol();
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t r = 3 + rng.uniform_below(2);
    const std::size_t k = (c % 2 == 0) ? r - 1 : 1 + rng.uniform_below(r - 1);
    const std::size_t n = r + rng.uniform_below(r == 3 ? 12 : 20);
    const auto sc = structured_case(rng, r, k, n);
    const auto z = lrsca::membership(sc.instance, sc.D, tol);
    bool ok = true;
    if (lrsca::certify_theorem1(sc.instance, z, tol)) {
      ++res.premises;
      ok = lrsca::certify_sequential(sc.instance, z, tol).has_value();
    }
    if (k == r - 1) {
      std::vector<std::size_t> order(r);
      std::iota(order.begin(), order.end(), std::size_t{0});
      do {
        const bool seq = lrsca::certify_ordering(sc.instance, z, lrsca::TheoremTag::seq, order, tol).has_value();
        const bool cor = lrsca::certify_ordering(sc.instance, z, lrsca::TheoremTag::cor2, order, tol).has_value();
        ok = ok && seq == cor;
      } while (std::next_permutation(order.begin(), order.end()));
    }
    ++res.cases;
    if (!ok) ++res.violations;
  }
  return res;
}

// Any certifier success on a small r = 3 instance means the oracle finds
// exactly one decomposition, and it is the planted one.
inline SuiteResult oracle_agreement_suite(std::size_t cases, std::uint64_t seed) {
  lrsca::Rng rng(seed);
  SuiteResult res;
  const auto& tol = exact_tol();
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t k = 1 + rng.uniform_below(2);
    const std::size_t n = 6 + rng.uniform_below(9);
    const auto sc = structured_case(rng, 3, k, n);
    const auto z = lrsca::membership(sc.instance, sc.D, tol);
    const bool certified = lrsca::certify_theorem1(sc.instance, z, tol) ||
                           lrsca::certify_sequential(sc.instance, z, tol) ||
                           lrsca::certify_corollary2(sc.instance, z, tol);
    const auto oracle = lrsca::enumerate_decompositions(sc.instance);
    bool ok = true;
    if (certified) {
      ++res.premises;
      ok = oracle.unique() && listed(oracle, sc.D);
    }
    if (oracle.count && *oracle.count >= 2) ok = ok && !certified;
    ++res.cases;
    if (!ok) ++res.violations;
  }
  return res;
}

// The oracle count does not change when M is permuted, rescaled or mixed by
// an invertible matrix.
inline SuiteResult oracle_invariance_suite(std::size_t cases, std::uint64_t seed) {
  lrsca::Rng rng(seed);
  SuiteResult res;
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t k = 1 + rng.uniform_below(2);
    const auto sc = structured_case(rng, 3, k, 5 + rng.uniform_below(6));
    const auto& m = sc.instance.data();
    const auto base = lrsca::enumerate_decompositions(sc.instance).count;
    const auto moved = lrsca::enumerate_decompositions(lrsca::Instance<Q>(permute_and_scale(rng, m), 3, k)).count;
    const auto mixed =
        lrsca::enumerate_decompositions(lrsca::Instance<Q>(random_invertible(rng, 3) * m, 3, k)).count;
    ++res.cases;
    if (base != moved || base != mixed) ++res.violations;
  }
  return res;
}

// Whatever simultaneous recovery returns, sequential recovery also returns.
inline SuiteResult recovery_dominance_suite(std::size_t cases, std::uint64_t seed) {
  lrsca::Rng rng(seed);
  SuiteResult res;
  const auto& tol = exact_tol();
  auto attempt = [&](const lrsca::Instance<Q>& inst, lrsca::RecoveryStrategy s) -> std::optional<Matrix<Q>> {
    lrsca::RecoveryConfig cfg;
    cfg.r = inst.r();
    cfg.k = inst.k();
    cfg.strategy = s;
    try {
      return lrsca::recover(inst.data(), cfg).decomposition.D;
    } catch (const lrsca::Error&) {
      return std::nullopt;
    }
  };
  for (std::size_t c = 0; c < cases; ++c) {
    const auto sc = structured_case(rng, 3, 2, 6 + rng.uniform_below(9));
    const auto sim = attempt(sc.instance, lrsca::RecoveryStrategy::simultaneous);
    const auto seq = attempt(sc.instance, lrsca::RecoveryStrategy::sequential);
    bool ok = true;
    if (sim) {
      ++res.premises;
      ok = seq && lrsca::essentially_equal(*sim, *seq, tol).has_value();
    }
    ++res.cases;
    if (!ok) ++res.violations;
  }
  return res;
}

}  // namespace testing
