#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lrsca/linalg.hpp"

namespace lrsca {

/// Data matrix M (p x n) with target rank r and sparsity k. Construction
/// enforces 1 <= k < r <= p; rank(M) = r is reported by validate().
template <Scalar T>
class Instance {
 public:
  Instance(Matrix<T> m, std::size_t r, std::size_t k);

  const Matrix<T>& data() const noexcept { return m_; }
  std::size_t r() const noexcept { return r_; }
  std::size_t k() const noexcept { return k_; }
  /// Co-sparsity: minimum number of zeros per coefficient column.
  std::size_t ell() const noexcept { return r_ - k_; }
  std::size_t n() const noexcept { return m_.cols(); }
  std::size_t p() const noexcept { return m_.rows(); }

 private:
  Matrix<T> m_;
  std::size_t r_;
  std::size_t k_;
};

template <Scalar T>
struct Decomposition {
  Matrix<T> D;  // p x r
  Matrix<T> B;  // r x n
};

/// z(j, i) is true when column i of M lies on hyperplane j of the dictionary.
class MembershipMatrix {
 public:
  MembershipMatrix(std::size_t hyperplanes, std::size_t points)
      : rows_(hyperplanes), cols_(points), cells_(hyperplanes * points, false) {}

  std::size_t hyperplanes() const noexcept { return rows_; }
  std::size_t points() const noexcept { return cols_; }
  bool operator()(std::size_t j, std::size_t i) const { return cells_[j * cols_ + i]; }
  void set(std::size_t j, std::size_t i, bool v) { cells_[j * cols_ + i] = v; }

  /// I_j: indices of the points on hyperplane j, ascending.
  std::vector<std::size_t> index_set(std::size_t j) const;
  /// Number of hyperplanes containing point i.
  std::size_t multiplicity(std::size_t i) const;

  friend bool operator==(const MembershipMatrix&, const MembershipMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<bool> cells_;
};

struct ValidationReport {
  bool shape_ok = true;
  bool reconstruction_ok = false;  // M = D B
  bool rank_d_ok = false;          // rank(D) = r
  bool rank_m_ok = false;          // rank(M) = r
  bool sparsity_ok = false;        // ||b_i||_0 <= k for all i
  bool support_consistent = false; // B(j, i) = 0 implies m_i on F_j
  std::vector<std::size_t> dense_columns;

  bool passed() const {
    return shape_ok && reconstruction_ok && rank_d_ok && rank_m_ok && sparsity_ok && support_consistent;
  }
  std::string summary() const;
};

/// Column i of D equals scales[i] times column permutation[i] of the other
/// dictionary.
template <Scalar T>
struct EquivalenceWitness {
  std::vector<std::size_t> permutation;
  std::vector<T> scales;
};

/// Number of nonzeros of a coefficient column; floating mode treats entries
/// with |b| <= rel_eps * max|b| as zero.
template <Scalar T>
std::size_t support_size(std::span<const T> b, const Tolerance& tol);

/// Throws Errc::shape_mismatch when D, B and M disagree in shape.
template <Scalar T>
ValidationReport validate(const Instance<T>& inst, const Decomposition<T>& dec, const Tolerance& tol);

/// F_i = span of every column of D except column i. Throws
/// Errc::rank_deficient when rank(D) < cols(D).
template <Scalar T>
std::vector<Subspace<T>> hyperplanes_of(const Matrix<T>& d, const Tolerance& tol);

/// Throws Errc::not_covered when some column of M lies outside span(D).
template <Scalar T>
MembershipMatrix membership(const Instance<T>& inst, const Matrix<T>& d, const Tolerance& tol);

/// Column i spans the intersection of every hyperplane except fs[i], scaled
/// canonically. Throws Errc::degenerate_arrangement unless each of those
/// intersections is a line.
template <Scalar T>
Matrix<T> dictionary_from_hyperplanes(const std::vector<Subspace<T>>& fs, const Tolerance& tol);

/// Copy of D with every column canonically scaled.
template <Scalar T>
Matrix<T> canonical_dictionary(const Matrix<T>& d, const Tolerance& tol);

/// Witness that D = D2 * Pi * Sigma, or nullopt. Floating mode accepts a
/// match when the unit-normalised columns agree up to sign within rel_eps.
/// Throws Errc::shape_mismatch on differing shapes, Errc::rank_deficient when
/// either dictionary lacks full column rank, Errc::degenerate_arrangement when
/// one column matches several candidates.
template <Scalar T>
std::optional<EquivalenceWitness<T>> essentially_equal(const Matrix<T>& d, const Matrix<T>& d2, const Tolerance& tol);

/// Applies a witness to D2: column i of the result is scales[i] * d2[:, permutation[i]].
template <Scalar T>
Matrix<T> apply_witness(const Matrix<T>& d2, const EquivalenceWitness<T>& w);

}  // namespace lrsca
