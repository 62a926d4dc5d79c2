#pragma once

#include <cstddef>
#include <vector>

#include "lrsca/model.hpp"

namespace lrsca {

enum class RecoveryStrategy { simultaneous, sequential };

struct RecoveryConfig {
  std::size_t r = 3;
  std::size_t k = 2;
  Tolerance tol = Tolerance::exact();
  /// Budget on enumeration nodes (partial subsets visited).
  std::size_t max_subsets = 1'000'000;
  RecoveryStrategy strategy = RecoveryStrategy::simultaneous;
  SparkOptions spark;
};

template <Scalar T>
struct FoundHyperplane {
  Subspace<T> subspace;               // span of the witness columns of M
  std::vector<std::size_t> witness;   // first subset that certified it
  std::vector<std::size_t> incident;  // every column of M lying on it
};

template <Scalar T>
struct HyperplaneSearch {
  std::vector<FoundHyperplane<T>> found;
  bool cap_exceeded = false;
  std::size_t subsets_visited = 0;
};

/// Enumerates lemma2_bound(r, k)-subsets of columns in lexicographic order,
/// extending a partial subset only while it stays inside some (r-1)-dimensional
/// span, and keeps every subset of rank r-1 and spark r. Hyperplanes are
/// deduplicated by subspace equality; the search stops after r distinct ones
/// or when the node budget runs out (partial result, cap_exceeded set).
/// Throws Errc::invalid_params when rank(M) != r or the config is malformed.
template <Scalar T>
HyperplaneSearch<T> find_certified_hyperplanes(const Matrix<T>& m, const RecoveryConfig& cfg);

template <Scalar T>
struct Recovery {
  Decomposition<T> decomposition;  // D canonically scaled, atoms in discovery order
  std::vector<FoundHyperplane<T>> hyperplanes;
  std::size_t subsets_visited = 0;
};

/// Simultaneous: find r certified hyperplanes, intersect them into a
/// dictionary and solve for B. Sequential: certify one hyperplane at a time
/// at stage bound floor((r-j+1)(r-2)/(r-k))+1 (never below r-1), removing its
/// incident columns before the next stage. Throws Errc::not_identified when
/// fewer than r hyperplanes certify, Errc::invalid_decomposition when the
/// assembled pair fails validation, Errc::cap_exceeded on budget exhaustion.
template <Scalar T>
Recovery<T> recover(const Matrix<T>& m, const RecoveryConfig& cfg);

/// Stage bound used by the sequential strategy (stage counted from 1).
std::size_t peeling_stage_bound(std::size_t r, std::size_t k, std::size_t stage);

}  // namespace lrsca
