#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "lrsca/model.hpp"

namespace lrsca {

enum class TheoremTag { lemma2, thm1, seq, cor2 };
std::string_view theorem_name(TheoremTag tag);

enum class OrderingStrategy { exhaustive, greedy };

/// floor(r(r-2)/(r-k)) + 1. Throws Errc::invalid_params unless 1 <= k < r.
std::size_t lemma2_bound(std::size_t r, std::size_t k);

/// ceil(r * lemma2_bound(r, k) / (r-k)): the sample count implied when every
/// hyperplane carries lemma2_bound points and each point sits on r-k of them.
std::size_t minimum_total_points(std::size_t r, std::size_t k);

/// floor(((r-position+1)(r-2) + c_sum)/(r-k)) + 1, position counted from 1.
std::size_t sequential_bound(std::size_t r, std::size_t k, std::size_t position, std::size_t c_sum);

/// (r-position+1)(r-2) + 1: the smallest |I_j| with |I_j| > (r-j+1)(r-2).
std::size_t corollary2_bound(std::size_t r, std::size_t position);

template <Scalar T>
struct HyperplaneCert {
  TheoremTag tag = TheoremTag::lemma2;
  std::size_t hyperplane = 0;  // row of the membership matrix
  std::size_t position = 0;    // 1-based position in the ordering; 0 when unordered
  std::vector<std::size_t> index_set;
  Subspace<T> subspace{0};
  std::size_t spark_value = 0;
  std::size_t bound_used = 0;
  // Bound arithmetic: bound_used = floor(numerator / denominator) + 1 for
  // lemma2/thm1/seq, numerator + 1 for cor2.
  std::size_t numerator = 0;
  std::size_t denominator = 1;
  std::size_t c_sum = 0;
  std::vector<std::size_t> pruned;  // points dropped because c_{i->j} >= r-k
  bool from_subset_search = false;  // maximal I_j failed; a subset was found
};

/// c_{i->j} keyed by (point i, hyperplane j), defined for i in I_j.
using CTable = std::map<std::pair<std::size_t, std::size_t>, std::size_t>;

template <Scalar T>
struct Certificate {
  TheoremTag method = TheoremTag::thm1;
  std::size_t r = 0;
  std::size_t k = 0;
  std::vector<HyperplaneCert<T>> per_hyperplane;  // listed in ordering order
  std::vector<std::size_t> ordering;              // empty for thm1
  CTable c_table;
};

struct CertifyOptions {
  SparkOptions spark;
  OrderingStrategy strategy = OrderingStrategy::exhaustive;
  /// Apply the w.l.o.g. pruning c_{i->j} <= r-k-1 before counting.
  bool prune = true;
  /// Orderings are enumerated exhaustively up to this r, greedily beyond.
  std::size_t exhaustive_max_r = 8;
  /// Subsets examined per hyperplane when the maximal index set fails.
  std::size_t subset_search_cap = 100000;
};

/// Single-hyperplane test on a block of points: rank r-1, spark r and at least
/// lemma2_bound(r, k) columns. index_set in the result is local (0..n1-1).
template <Scalar T>
std::optional<HyperplaneCert<T>> certify_hyperplane(const Matrix<T>& points, std::size_t r, std::size_t k,
                                                    const Tolerance& tol, const CertifyOptions& opts = {});

/// Simultaneous condition: every hyperplane j carries a spark-r set
/// I_j within {i : z(j, i)} with |I_j| >= lemma2_bound(r, k).
template <Scalar T>
std::optional<Certificate<T>> certify_theorem1(const Instance<T>& inst, const MembershipMatrix& z,
                                               const Tolerance& tol, const CertifyOptions& opts = {});

/// ordering[t] is the hyperplane processed at position t+1.
CTable c_table(const MembershipMatrix& z, std::span<const std::size_t> ordering);

/// Sequential condition with correction terms c_{i->j}; returns the
/// lexicographically smallest certifying ordering.
template <Scalar T>
std::optional<Certificate<T>> certify_sequential(const Instance<T>& inst, const MembershipMatrix& z,
                                                 const Tolerance& tol, const CertifyOptions& opts = {});

/// Same search with the cardinality test |I_j| > (r-j+1)(r-2).
template <Scalar T>
std::optional<Certificate<T>> certify_corollary2(const Instance<T>& inst, const MembershipMatrix& z,
                                                 const Tolerance& tol, const CertifyOptions& opts = {});

/// Evaluates one fixed ordering with the seq or cor2 test (ordering[t] is the
/// hyperplane at position t+1). Throws Errc::invalid_params when ordering is
/// not a permutation of 0..r-1 or tag is neither seq nor cor2.
template <Scalar T>
std::optional<Certificate<T>> certify_ordering(const Instance<T>& inst, const MembershipMatrix& z, TheoremTag tag,
                                               std::span<const std::size_t> ordering, const Tolerance& tol,
                                               const CertifyOptions& opts = {});

}  // namespace lrsca
