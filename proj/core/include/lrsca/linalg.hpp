#pragma once

#include <concepts>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "lrsca/errors.hpp"

namespace lrsca {

using Rational = mpq_class;

enum class Backend { exact, floating };

template <class T>
concept Scalar = std::same_as<T, Rational> || std::same_as<T, double>;

template <Scalar T>
inline constexpr Backend backend_of = std::same_as<T, Rational> ? Backend::exact : Backend::floating;

std::string backend_name(Backend b);

inline constexpr double kDefaultRelEps = 1e-9;
inline constexpr double kMaxRelEps = 1e-3;

/// Zero test policy. Exact mode decides by exact arithmetic; relative mode
/// compares against rel_eps times a scale taken from the data at hand.
class Tolerance {
 public:
  static Tolerance exact() noexcept { return Tolerance(0.0); }
  /// Throws Errc::invalid_params unless 0 < rel_eps <= 1e-3.
  static Tolerance relative(double rel_eps = kDefaultRelEps);

  bool is_exact() const noexcept { return rel_eps_ == 0.0; }
  double rel_eps() const noexcept { return rel_eps_; }

 private:
  explicit Tolerance(double eps) noexcept : rel_eps_(eps) {}
  double rel_eps_;
};

/// Exact for Rational, relative(1e-9) for double.
template <Scalar T>
Tolerance default_tolerance() {
  if constexpr (backend_of<T> == Backend::exact) {
    return Tolerance::exact();
  } else {
    return Tolerance::relative();
  }
}

/// Dense matrix stored column-major; columns are the data points throughout
/// the library.
template <Scalar T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  static Matrix identity(std::size_t n);
  /// Throws Errc::shape_mismatch on ragged input, Errc::invalid_params on
  /// non-finite floating values.
  static Matrix from_rows(const std::vector<std::vector<T>>& rows);
  static Matrix from_columns(const std::vector<std::vector<T>>& cols, std::size_t rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }

  std::span<const T> col(std::size_t c) const { return {data_.data() + c * rows_, rows_}; }
  std::span<T> col(std::size_t c) { return {data_.data() + c * rows_, rows_}; }
  std::vector<T> column(std::size_t c) const { return {col(c).begin(), col(c).end()}; }

  Matrix select_columns(std::span<const std::size_t> idx) const;
  Matrix transposed() const;
  /// Appends the columns of other; rows must match.
  Matrix hconcat(const Matrix& other) const;
  bool is_zero() const;

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <Scalar T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b);
template <Scalar T>
Matrix<T> operator-(const Matrix<T>& a, const Matrix<T>& b);

Matrix<double> to_double(const Matrix<Rational>& m);
/// Exact binary value of every entry.
Matrix<Rational> to_rational(const Matrix<double>& m);

/// Largest absolute entry of a column (Frobenius-free scale used by relative
/// zero tests).
template <Scalar T>
double max_abs(std::span<const T> x);

/// Linear subspace given by a basis of linearly independent columns.
template <Scalar T>
class Subspace {
 public:
  explicit Subspace(std::size_t ambient_dim) : basis_(ambient_dim, 0) {}
  /// The caller guarantees the columns are independent; span_of() is the
  /// checked entry point.
  static Subspace from_independent(Matrix<T> basis) { return Subspace(std::move(basis)); }

  std::size_t ambient_dim() const noexcept { return basis_.rows(); }
  std::size_t dim() const noexcept { return basis_.cols(); }
  const Matrix<T>& basis() const noexcept { return basis_; }

 private:
  explicit Subspace(Matrix<T> basis) : basis_(std::move(basis)) {}
  Matrix<T> basis_;
};

/// Stack of vectors with incremental independence tests. Push any vector;
/// push() reports whether it raised the dimension; pop() undoes the last
/// push. Exact mode keeps an echelon form, floating mode an orthonormal set
/// and declares dependence when the residual is at most rel_eps * max|x|.
template <Scalar T>
class IncrementalBasis {
 public:
  IncrementalBasis(std::size_t ambient_dim, Tolerance tol);

  bool independent_of_span(std::span<const T> x) const;
  bool push(std::span<const T> x);
  void pop();
  std::size_t dim() const noexcept { return vectors_.size(); }
  std::size_t size() const noexcept { return raised_.size(); }

 private:
  std::vector<T> reduce(std::span<const T> x) const;

  std::size_t ambient_;
  Tolerance tol_;
  std::vector<std::vector<T>> vectors_;
  std::vector<std::size_t> pivots_;
  std::vector<bool> raised_;
};

template <Scalar T>
std::size_t rank(const Matrix<T>& m, const Tolerance& tol);

/// Indices of a maximal independent column set, chosen greedily left to right.
template <Scalar T>
std::vector<std::size_t> independent_columns(const Matrix<T>& m, const Tolerance& tol);

struct SparkOptions {
  std::size_t max_columns = 25;
};

struct SparkResult {
  std::size_t value = 0;
  /// Lexicographically first minimal dependent subset; empty when value = n+1.
  std::vector<std::size_t> witness;
};

/// Throws Errc::size_limit when cols > opts.max_columns, Errc::invalid_params
/// on a matrix without columns.
template <Scalar T>
SparkResult spark_with_witness(const Matrix<T>& m, const Tolerance& tol, const SparkOptions& opts = {});

template <Scalar T>
std::size_t spark(const Matrix<T>& m, const Tolerance& tol, const SparkOptions& opts = {}) {
  return spark_with_witness(m, tol, opts).value;
}

template <Scalar T>
struct RankReduction {
  Matrix<T> reduced;  // r x n
  Matrix<T> lift;     // p x r, lift * reduced == m
};

/// Exact mode uses the leftmost independent columns of m as the lift; floating
/// mode the leading left singular vectors. Throws Errc::degenerate_input on a
/// zero matrix.
template <Scalar T>
RankReduction<T> reduce_to_rank_space(const Matrix<T>& m, const Tolerance& tol);

template <Scalar T>
Subspace<T> span_of(const Matrix<T>& points, const Tolerance& tol);

template <Scalar T>
Subspace<T> intersect(const Subspace<T>& a, const Subspace<T>& b, const Tolerance& tol);

template <Scalar T>
bool contains(const Subspace<T>& s, std::span<const T> x, const Tolerance& tol);

template <Scalar T>
bool is_contained_in(const Subspace<T>& a, const Subspace<T>& b, const Tolerance& tol);

/// Mutual containment.
template <Scalar T>
bool same_subspace(const Subspace<T>& a, const Subspace<T>& b, const Tolerance& tol);

/// Columns form a basis of {x : m x = 0}.
template <Scalar T>
Matrix<T> nullspace(const Matrix<T>& m, const Tolerance& tol);

/// Unique B with m = d B. Throws Errc::rank_deficient when d lacks full column
/// rank and Errc::not_in_span when a column of m is outside span(d).
template <Scalar T>
Matrix<T> solve_coefficients(const Matrix<T>& d, const Matrix<T>& m, const Tolerance& tol);

/// Scales x so its first nonzero entry is positive; floating mode also
/// normalises to unit Euclidean norm, exact mode sets that entry to 1.
template <Scalar T>
void canonical_scale(std::span<T> x, const Tolerance& tol);

template <Scalar T>
bool is_zero_vector(std::span<const T> x);

}  // namespace lrsca
