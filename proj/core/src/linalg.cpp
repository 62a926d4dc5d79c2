#include "lrsca/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

namespace lrsca {

std::string backend_name(Backend b) { return b == Backend::exact ? "exact" : "float"; }

Tolerance Tolerance::relative(double rel_eps) {
  if (!(rel_eps > 0.0 && rel_eps <= kMaxRelEps)) {
    throw Error(Errc::invalid_params, "relative tolerance must lie in (0, 1e-3], got " + std::to_string(rel_eps));
  }
  return Tolerance(rel_eps);
}

// ---------------------------------------------------------------------------
// Matrix

template <Scalar T>
Matrix<T> Matrix<T>::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
  return m;
}

template <Scalar T>
static void check_finite(const T& x) {
  if constexpr (std::same_as<T, double>) {
    if (!std::isfinite(x)) throw Error(Errc::invalid_params, "matrix entries must be finite");
  }
}

template <Scalar T>
Matrix<T> Matrix<T>::from_rows(const std::vector<std::vector<T>>& rows) {
  const std::size_t nr = rows.size();
  const std::size_t nc = nr == 0 ? 0 : rows.front().size();
  Matrix m(nr, nc);
  for (std::size_t i = 0; i < nr; ++i) {
    if (rows[i].size() != nc) throw Error(Errc::shape_mismatch, "ragged row " + std::to_string(i));
    for (std::size_t j = 0; j < nc; ++j) {
      check_finite(rows[i][j]);
      m(i, j) = rows[i][j];
    }
  }
  return m;
}

template <Scalar T>
Matrix<T> Matrix<T>::from_columns(const std::vector<std::vector<T>>& cols, std::size_t rows) {
  Matrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) throw Error(Errc::shape_mismatch, "column " + std::to_string(j) + " has wrong length");
    for (std::size_t i = 0; i < rows; ++i) {
      check_finite(cols[j][i]);
      m(i, j) = cols[j][i];
    }
  }
  return m;
}

template <Scalar T>
Matrix<T> Matrix<T>::select_columns(std::span<const std::size_t> idx) const {
  Matrix out(rows_, idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j) {
    if (idx[j] >= cols_) throw Error(Errc::shape_mismatch, "column index out of range");
    std::copy(col(idx[j]).begin(), col(idx[j]).end(), out.col(j).begin());
  }
  return out;
}

template <Scalar T>
Matrix<T> Matrix<T>::transposed() const {
  Matrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

template <Scalar T>
Matrix<T> Matrix<T>::hconcat(const Matrix& other) const {
  if (other.rows_ != rows_ && other.cols_ != 0 && cols_ != 0) {
    throw Error(Errc::shape_mismatch, "hconcat row mismatch");
  }
  Matrix out(std::max(rows_, other.rows_), cols_ + other.cols_);
  for (std::size_t j = 0; j < cols_; ++j) std::copy(col(j).begin(), col(j).end(), out.col(j).begin());
  for (std::size_t j = 0; j < other.cols_; ++j)
    std::copy(other.col(j).begin(), other.col(j).end(), out.col(cols_ + j).begin());
  return out;
}

template <Scalar T>
bool Matrix<T>::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const T& x) { return x == 0; });
}

template <Scalar T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw Error(Errc::shape_mismatch, "product of incompatible shapes");
  Matrix<T> out(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T& bk = b(k, j);
      if (bk == 0) continue;
      for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) += a(i, k) * bk;
    }
  }
  return out;
}

template <Scalar T>
Matrix<T> operator-(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(Errc::shape_mismatch, "difference of incompatible shapes");
  Matrix<T> out(a.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) = a(i, j) - b(i, j);
  return out;
}

Matrix<double> to_double(const Matrix<Rational>& m) {
  Matrix<double> out(m.rows(), m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) out(i, j) = m(i, j).get_d();
  return out;
}

Matrix<Rational> to_rational(const Matrix<double>& m) {
  Matrix<Rational> out(m.rows(), m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) out(i, j) = Rational(m(i, j));
  return out;
}

template <Scalar T>
double max_abs(std::span<const T> x) {
  double best = 0.0;
  for (const T& v : x) {
    if constexpr (std::same_as<T, Rational>) {
      best = std::max(best, std::fabs(v.get_d()));
    } else {
      best = std::max(best, std::fabs(v));
    }
  }
  return best;
}

template <Scalar T>
bool is_zero_vector(std::span<const T> x) {
  return std::all_of(x.begin(), x.end(), [](const T& v) { return v == 0; });
}

namespace {

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Eigen::MatrixXd to_eigen(const Matrix<double>& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) e(i, j) = m(i, j);
  return e;
}

Matrix<double> from_eigen(const Eigen::MatrixXd& e) {
  Matrix<double> m(e.rows(), e.cols());
  for (Eigen::Index j = 0; j < e.cols(); ++j)
    for (Eigen::Index i = 0; i < e.rows(); ++i) m(i, j) = e(i, j);
  return m;
}

// Reduced row echelon form in place; returns the pivot column of each
// nonzero row.
std::vector<std::size_t> rref(Matrix<Rational>& a) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < a.cols() && row < a.rows(); ++c) {
    std::size_t sel = row;
    while (sel < a.rows() && a(sel, c) == 0) ++sel;
    if (sel == a.rows()) continue;
    if (sel != row)
      for (std::size_t j = c; j < a.cols(); ++j) std::swap(a(sel, j), a(row, j));
    const Rational inv = 1 / a(row, c);
    for (std::size_t j = c; j < a.cols(); ++j) a(row, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || a(i, c) == 0) continue;
      const Rational f = a(i, c);
      for (std::size_t j = c; j < a.cols(); ++j) a(i, j) -= f * a(row, j);
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

std::size_t svd_rank(const Eigen::VectorXd& sv, double eps) {
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cut = eps * sv(0);
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++r;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// IncrementalBasis

template <Scalar T>
IncrementalBasis<T>::IncrementalBasis(std::size_t ambient_dim, Tolerance tol) : ambient_(ambient_dim), tol_(tol) {
  if constexpr (std::same_as<T, double>) {
    if (tol_.is_exact()) tol_ = Tolerance::relative();
  }
}

template <Scalar T>
std::vector<T> IncrementalBasis<T>::reduce(std::span<const T> x) const {
  std::vector<T> r(x.begin(), x.end());
  if constexpr (std::same_as<T, Rational>) {
    for (std::size_t k = 0; k < vectors_.size(); ++k) {
      const Rational f = r[pivots_[k]];
      if (f == 0) continue;
      const auto& v = vectors_[k];
      for (std::size_t i = pivots_[k]; i < ambient_; ++i)
        if (v[i] != 0) r[i] -= f * v[i];
    }
  } else {
    // Two Gram-Schmidt passes keep the residual orthogonal to working precision.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : vectors_) {
        const double f = dot(q, r);
        for (std::size_t i = 0; i < ambient_; ++i) r[i] -= f * q[i];
      }
    }
  }
  return r;
}

template <Scalar T>
bool IncrementalBasis<T>::independent_of_span(std::span<const T> x) const {
  if (x.size() != ambient_) throw Error(Errc::shape_mismatch, "vector length differs from ambient dimension");
  const auto r = reduce(x);
  if constexpr (std::same_as<T, Rational>) {
    return !is_zero_vector<Rational>(r);
  } else {
    const double scale = max_abs<double>(x);
    if (scale == 0.0) return false;
    return max_abs<double>(r) > tol_.rel_eps() * scale;
  }
}

template <Scalar T>
bool IncrementalBasis<T>::push(std::span<const T> x) {
  if (x.size() != ambient_) throw Error(Errc::shape_mismatch, "vector length differs from ambient dimension");
  auto r = reduce(x);
  bool raised = false;
  if constexpr (std::same_as<T, Rational>) {
    auto it = std::find_if(r.begin(), r.end(), [](const Rational& v) { return v != 0; });
    if (it != r.end()) {
      const std::size_t p = static_cast<std::size_t>(it - r.begin());
      const Rational inv = 1 / r[p];
      for (std::size_t i = p; i < ambient_; ++i) r[i] *= inv;
      vectors_.push_back(std::move(r));
      pivots_.push_back(p);
      raised = true;
    }
  } else {
    const double scale = max_abs<double>(x);
    if (scale > 0.0 && max_abs<double>(r) > tol_.rel_eps() * scale) {
      const double n = norm2(r);
      for (double& v : r) v /= n;
      vectors_.push_back(std::move(r));
      pivots_.push_back(0);
      raised = true;
    }
  }
  raised_.push_back(raised);
  return raised;
}

template <Scalar T>
void IncrementalBasis<T>::pop() {
  if (raised_.empty()) return;
  if (raised_.back()) {
    vectors_.pop_back();
    pivots_.pop_back();
  }
  raised_.pop_back();
}

// ---------------------------------------------------------------------------
// rank, spark, spans

template <Scalar T>
std::size_t rank(const Matrix<T>& m, const Tolerance& tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  if constexpr (std::same_as<T, Rational>) {
    (void)tol;
    Matrix<Rational> a = m;
    return rref(a).size();
  } else {
    const double eps = tol.is_exact() ? kDefaultRelEps : tol.rel_eps();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m));
    return svd_rank(svd.singularValues(), eps);
  }
}

template <Scalar T>
std::vector<std::size_t> independent_columns(const Matrix<T>& m, const Tolerance& tol) {
  IncrementalBasis<T> basis(m.rows(), tol);
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < m.cols() && basis.dim() < m.rows(); ++j)
    if (basis.push(m.col(j))) idx.push_back(j);
  return idx;
}

namespace {

// Walks (size-1)-subsets in lexicographic order and tests each extension by a
// later column. All (size-1)-subsets are independent when this is called.
template <Scalar T>
bool first_dependent_subset(const Matrix<T>& m, IncrementalBasis<T>& basis, std::vector<std::size_t>& chosen,
                            std::size_t start, std::size_t size) {
  if (chosen.size() + 1 == size) {
    for (std::size_t j = start; j < m.cols(); ++j) {
      if (!basis.independent_of_span(m.col(j))) {
        chosen.push_back(j);
        return true;
      }
    }
    return false;
  }
  const std::size_t remaining = size - 1 - chosen.size();
  for (std::size_t j = start; j + remaining < m.cols(); ++j) {
    basis.push(m.col(j));
    chosen.push_back(j);
    if (first_dependent_subset(m, basis, chosen, j + 1, size)) return true;
    chosen.pop_back();
    basis.pop();
  }
  return false;
}

}  // namespace

template <Scalar T>
SparkResult spark_with_witness(const Matrix<T>& m, const Tolerance& tol, const SparkOptions& opts) {
  if (m.cols() == 0) throw Error(Errc::invalid_params, "spark of a matrix without columns");
  if (m.cols() > opts.max_columns) {
    throw Error(Errc::size_limit, "spark enumeration limited to " + std::to_string(opts.max_columns) + " columns, got " +
                                      std::to_string(m.cols()));
  }
  const std::size_t n = m.cols();
  const std::size_t rk = independent_columns(m, tol).size();
  if (rk == n) return {n + 1, {}};
  for (std::size_t size = 1; size <= rk + 1; ++size) {
    IncrementalBasis<T> basis(m.rows(), tol);
    std::vector<std::size_t> chosen;
    if (first_dependent_subset(m, basis, chosen, 0, size)) return {size, chosen};
  }
  // Unreachable: rk + 1 columns inside an rk-dimensional space are dependent.
  throw Error(Errc::degenerate_input, "spark enumeration found no dependent subset");
}

template <Scalar T>
RankReduction<T> reduce_to_rank_space(const Matrix<T>& m, const Tolerance& tol) {
  if (m.is_zero()) throw Error(Errc::degenerate_input, "cannot reduce the zero matrix");
  if constexpr (std::same_as<T, Rational>) {
    const auto idx = independent_columns(m, tol);
    Matrix<Rational> lift = m.select_columns(idx);
    Matrix<Rational> reduced = solve_coefficients(lift, m, tol);
    return {std::move(reduced), std::move(lift)};
  } else {
    const double eps = tol.is_exact() ? kDefaultRelEps : tol.rel_eps();
    const Eigen::MatrixXd e = to_eigen(m);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(e, Eigen::ComputeThinU);
    const auto r = static_cast<Eigen::Index>(svd_rank(svd.singularValues(), eps));
    if (r == 0) throw Error(Errc::degenerate_input, "numerically zero matrix");
    const Eigen::MatrixXd q = svd.matrixU().leftCols(r);
    return {from_eigen(q.transpose() * e), from_eigen(q)};
  }
}

template <Scalar T>
Subspace<T> span_of(const Matrix<T>& points, const Tolerance& tol) {
  return Subspace<T>::from_independent(points.select_columns(independent_columns(points, tol)));
}

template <Scalar T>
Matrix<T> nullspace(const Matrix<T>& m, const Tolerance& tol) {
  const std::size_t n = m.cols();
  if constexpr (std::same_as<T, Rational>) {
    (void)tol;
    Matrix<Rational> a = m;
    const auto pivots = rref(a);
    std::vector<bool> is_pivot(n, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < n; ++c)
      if (!is_pivot[c]) free_cols.push_back(c);
    Matrix<Rational> out(n, free_cols.size());
    for (std::size_t f = 0; f < free_cols.size(); ++f) {
      out(free_cols[f], f) = 1;
      for (std::size_t row = 0; row < pivots.size(); ++row) out(pivots[row], f) = -a(row, free_cols[f]);
    }
    return out;
  } else {
    if (m.rows() == 0) return Matrix<double>::identity(n);
    const double eps = tol.is_exact() ? kDefaultRelEps : tol.rel_eps();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m), Eigen::ComputeFullV);
    const auto r = static_cast<Eigen::Index>(svd_rank(svd.singularValues(), eps));
    return from_eigen(svd.matrixV().rightCols(static_cast<Eigen::Index>(n) - r));
  }
}

template <Scalar T>
Subspace<T> intersect(const Subspace<T>& a, const Subspace<T>& b, const Tolerance& tol) {
  if (a.ambient_dim() != b.ambient_dim()) throw Error(Errc::shape_mismatch, "subspaces live in different spaces");
  const std::size_t amb = a.ambient_dim();
  if (a.dim() == 0 || b.dim() == 0) return Subspace<T>(amb);
  // x = A u = B v  <=>  [A | -B] (u; v) = 0.
  Matrix<T> stacked(amb, a.dim() + b.dim());
  for (std::size_t j = 0; j < a.dim(); ++j)
    for (std::size_t i = 0; i < amb; ++i) stacked(i, j) = a.basis()(i, j);
  for (std::size_t j = 0; j < b.dim(); ++j)
    for (std::size_t i = 0; i < amb; ++i) stacked(i, a.dim() + j) = -b.basis()(i, j);
  const Matrix<T> null = nullspace(stacked, tol);
  Matrix<T> vectors(amb, null.cols());
  for (std::size_t c = 0; c < null.cols(); ++c)
    for (std::size_t j = 0; j < a.dim(); ++j) {
      const T& u = null(j, c);
      if (u == 0) continue;
      for (std::size_t i = 0; i < amb; ++i) vectors(i, c) += a.basis()(i, j) * u;
    }
  return span_of(vectors, tol);
}

template <Scalar T>
bool contains(const Subspace<T>& s, std::span<const T> x, const Tolerance& tol) {
  if (x.size() != s.ambient_dim()) throw Error(Errc::shape_mismatch, "vector length differs from ambient dimension");
  if (is_zero_vector(x)) return true;
  IncrementalBasis<T> basis(s.ambient_dim(), tol);
  for (std::size_t j = 0; j < s.dim(); ++j) basis.push(s.basis().col(j));
  return !basis.independent_of_span(x);
}

template <Scalar T>
bool is_contained_in(const Subspace<T>& a, const Subspace<T>& b, const Tolerance& tol) {
  if (a.ambient_dim() != b.ambient_dim()) throw Error(Errc::shape_mismatch, "subspaces live in different spaces");
  if (a.dim() > b.dim()) return false;
  IncrementalBasis<T> basis(b.ambient_dim(), tol);
  for (std::size_t j = 0; j < b.dim(); ++j) basis.push(b.basis().col(j));
  for (std::size_t j = 0; j < a.dim(); ++j)
    if (basis.independent_of_span(a.basis().col(j))) return false;
  return true;
}

template <Scalar T>
bool same_subspace(const Subspace<T>& a, const Subspace<T>& b, const Tolerance& tol) {
  return a.dim() == b.dim() && is_contained_in(a, b, tol) && is_contained_in(b, a, tol);
}

template <Scalar T>
Matrix<T> solve_coefficients(const Matrix<T>& d, const Matrix<T>& m, const Tolerance& tol) {
  if (d.rows() != m.rows()) throw Error(Errc::shape_mismatch, "dictionary and data have different row counts");
  const std::size_t r = d.cols();
  if constexpr (std::same_as<T, Rational>) {
    Matrix<Rational> aug = d.hconcat(m);
    const auto pivots = rref(aug);
    std::size_t in_d = 0;
    for (auto p : pivots) {
      if (p < r) {
        ++in_d;
      } else {
        throw Error(Errc::not_in_span, "column " + std::to_string(p - r) + " is outside the span of the dictionary");
      }
    }
    if (in_d < r) throw Error(Errc::rank_deficient, "dictionary lacks full column rank");
    Matrix<Rational> b(r, m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j)
      for (std::size_t i = 0; i < r; ++i) b(i, j) = aug(i, r + j);
    (void)tol;
    return b;
  } else {
    const double eps = tol.is_exact() ? kDefaultRelEps : tol.rel_eps();
    const Eigen::MatrixXd de = to_eigen(d);
    if (rank(d, tol) < r) throw Error(Errc::rank_deficient, "dictionary lacks full column rank");
    const Eigen::MatrixXd me = to_eigen(m);
    const Eigen::MatrixXd be = de.colPivHouseholderQr().solve(me);
    const Eigen::MatrixXd res = me - de * be;
    for (Eigen::Index j = 0; j < me.cols(); ++j) {
      const double scale = me.col(j).cwiseAbs().maxCoeff();
      if (res.col(j).cwiseAbs().maxCoeff() > eps * std::max(scale, 1e-300) && scale > 0.0) {
        throw Error(Errc::not_in_span, "column " + std::to_string(j) + " is outside the span of the dictionary");
      }
    }
    return from_eigen(be);
  }
}

template <Scalar T>
void canonical_scale(std::span<T> x, const Tolerance& tol) {
  if constexpr (std::same_as<T, Rational>) {
    (void)tol;
    auto it = std::find_if(x.begin(), x.end(), [](const Rational& v) { return v != 0; });
    if (it == x.end()) return;
    const Rational inv = 1 / *it;
    for (auto& v : x) v *= inv;
  } else {
    const double n = norm2(x);
    if (n == 0.0) return;
    const double eps = tol.is_exact() ? kDefaultRelEps : tol.rel_eps();
    const double scale = max_abs<double>(x);
    double sign = 1.0;
    for (double v : x) {
      if (std::fabs(v) > eps * scale) {
        sign = v < 0 ? -1.0 : 1.0;
        break;
      }
    }
    for (auto& v : x) v = sign * v / n;
  }
}

#define LRSCA_INSTANTIATE(T)                                                                              \
  template class Matrix<T>;                                                                               \
  template class IncrementalBasis<T>;                                                                     \
  template Matrix<T> operator*(const Matrix<T>&, const Matrix<T>&);                                       \
  template Matrix<T> operator-(const Matrix<T>&, const Matrix<T>&);                                       \
  template double max_abs<T>(std::span<const T>);                                                         \
  template bool is_zero_vector<T>(std::span<const T>);                                                    \
  template std::size_t rank<T>(const Matrix<T>&, const Tolerance&);                                       \
  template std::vector<std::size_t> independent_columns<T>(const Matrix<T>&, const Tolerance&);           \
  template SparkResult spark_with_witness<T>(const Matrix<T>&, const Tolerance&, const SparkOptions&);     \
  template RankReduction<T> reduce_to_rank_space<T>(const Matrix<T>&, const Tolerance&);                  \
  template Subspace<T> span_of<T>(const Matrix<T>&, const Tolerance&);                                    \
  template Subspace<T> intersect<T>(const Subspace<T>&, const Subspace<T>&, const Tolerance&);            \
  template bool contains<T>(const Subspace<T>&, std::span<const T>, const Tolerance&);                    \
  template bool is_contained_in<T>(const Subspace<T>&, const Subspace<T>&, const Tolerance&);             \
  template bool same_subspace<T>(const Subspace<T>&, const Subspace<T>&, const Tolerance&);               \
  template Matrix<T> nullspace<T>(const Matrix<T>&, const Tolerance&);                                    \
  template Matrix<T> solve_coefficients<T>(const Matrix<T>&, const Matrix<T>&, const Tolerance&);         \
  template void canonical_scale<T>(std::span<T>, const Tolerance&);

LRSCA_INSTANTIATE(Rational)
LRSCA_INSTANTIATE(double)

#undef LRSCA_INSTANTIATE

}  // namespace lrsca
