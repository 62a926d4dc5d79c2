#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "lrsca/model.hpp"

namespace lrsca {

inline constexpr std::size_t kOracleMaxR = 4;
inline constexpr std::size_t kOracleMaxN = 40;

struct OracleOptions {
  /// Search nodes before Errc::cap_exceeded.
  std::size_t max_nodes = 20'000'000;
  /// Decompositions kept in the result list.
  std::size_t max_listed = 64;
  /// Seeds the random normals drawn for free hyperplanes.
  std::uint64_t seed = 0;
};

template <Scalar T>
struct OracleResult {
  /// Number of essentially distinct decompositions; nullopt means infinite.
  std::optional<std::size_t> count;
  /// Finite covers first, then representatives of infinite families.
  std::vector<Decomposition<T>> decompositions;
  bool free_hyperplane_flag = false;
  std::size_t candidate_hyperplanes = 0;  // distinct spans of rank-(r-1) column subsets
  std::size_t free_flats = 0;             // data-spanned flats of dimension <= r-2
  std::size_t nodes = 0;

  bool infinite() const { return !count.has_value(); }
  bool unique() const { return count.has_value() && *count == 1; }
};

/// Exhaustive search over covers of the columns by r hyperplanes, each column
/// on at least r-k of them. A hyperplane is either pinned (spanned by r-1
/// independent columns) or free (its incident columns span a flat W of
/// dimension <= r-2, and it is any generic hyperplane through W). Covers of
/// pinned hyperplanes with independent normals give the finite list; any
/// realizable cover using a free hyperplane makes the count infinite.
/// Throws Errc::exact_backend_required for floating input, Errc::cap_exceeded
/// when r > 4, n > 40 or the node budget runs out.
template <Scalar T>
OracleResult<T> enumerate_decompositions(const Instance<T>& inst, const OracleOptions& opts = {});

template <Scalar T>
bool is_essentially_unique(const Instance<T>& inst, const OracleOptions& opts = {});

}  // namespace lrsca
