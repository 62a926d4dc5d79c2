#include "lrsca/model.hpp"

#include <cmath>
#include <sstream>

namespace lrsca {

template <Scalar T>
Instance<T>::Instance(Matrix<T> m, std::size_t r, std::size_t k) : m_(std::move(m)), r_(r), k_(k) {
  if (!(1 <= k_ && k_ < r_ && r_ <= m_.rows())) {
    throw Error(Errc::invalid_params, "instance requires 1 <= k < r <= p (k=" + std::to_string(k_) +
                                          ", r=" + std::to_string(r_) + ", p=" + std::to_string(m_.rows()) + ")");
  }
  if (m_.cols() == 0) throw Error(Errc::invalid_params, "instance has no columns");
}

std::vector<std::size_t> MembershipMatrix::index_set(std::size_t j) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cols_; ++i)
    if ((*this)(j, i)) out.push_back(i);
  return out;
}

std::size_t MembershipMatrix::multiplicity(std::size_t i) const {
  std::size_t c = 0;
  for (std::size_t j = 0; j < rows_; ++j)
    if ((*this)(j, i)) ++c;
  return c;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  auto flag = [](bool b) { return b ? "pass" : "fail"; };
  os << "reconstruction=" << flag(reconstruction_ok) << " rank(D)=" << flag(rank_d_ok) << " rank(M)=" << flag(rank_m_ok)
     << " sparsity=" << flag(sparsity_ok) << " support=" << flag(support_consistent)
     << " overall=" << flag(passed());
  return os.str();
}

template <Scalar T>
std::size_t support_size(std::span<const T> b, const Tolerance& tol) {
  std::size_t nz = 0;
  if constexpr (std::same_as<T, Rational>) {
    (void)tol;
    for (const auto& v : b)
      if (v != 0) ++nz;
  } else {
    const double eps = tol.is_exact() ? kDefaultRelEps : tol.rel_eps();
    const double cut = eps * max_abs<double>(b);
    for (double v : b)
      if (std::fabs(v) > cut) ++nz;
  }
  return nz;
}

namespace {

template <Scalar T>
bool is_coefficient_zero(std::span<const T> b, std::size_t j, const Tolerance& tol) {
  if constexpr (std::same_as<T, Rational>) {
    (void)tol;
    return b[j] == 0;
  } else {
    const double eps = tol.is_exact() ? kDefaultRelEps : tol.rel_eps();
    return std::fabs(b[j]) <= eps * max_abs<double>(b);
  }
}

template <Scalar T>
bool reconstructs(const Matrix<T>& m, const Matrix<T>& d, const Matrix<T>& b, const Tolerance& tol) {
  const Matrix<T> prod = d * b;
  if constexpr (std::same_as<T, Rational>) {
    (void)tol;
    return prod == m;
  } else {
    const double eps = tol.is_exact() ? kDefaultRelEps : tol.rel_eps();
    std::vector<double> dscale(d.cols());
    for (std::size_t j = 0; j < d.cols(); ++j) dscale[j] = max_abs<double>(d.col(j));
    for (std::size_t i = 0; i < m.cols(); ++i) {
      double scale = max_abs<double>(m.col(i));
      for (std::size_t j = 0; j < d.cols(); ++j) scale += dscale[j] * std::fabs(b(j, i));
      for (std::size_t row = 0; row < m.rows(); ++row)
        if (std::fabs(m(row, i) - prod(row, i)) > eps * scale) return false;
    }
    return true;
  }
}

template <Scalar T>
std::vector<IncrementalBasis<T>> hyperplane_bases(const Matrix<T>& d, const Tolerance& tol) {
  std::vector<IncrementalBasis<T>> out;
  out.reserve(d.cols());
  for (std::size_t j = 0; j < d.cols(); ++j) {
    IncrementalBasis<T> basis(d.rows(), tol);
    for (std::size_t c = 0; c < d.cols(); ++c)
      if (c != j) basis.push(d.col(c));
    out.push_back(std::move(basis));
  }
  return out;
}

}  // namespace

template <Scalar T>
ValidationReport validate(const Instance<T>& inst, const Decomposition<T>& dec, const Tolerance& tol) {
  const auto& m = inst.data();
  const std::size_t r = inst.r();
  if (dec.D.rows() != m.rows() || dec.D.cols() != r || dec.B.rows() != r || dec.B.cols() != m.cols()) {
    throw Error(Errc::shape_mismatch, "decomposition shapes do not match the instance");
  }
  ValidationReport rep;
  rep.reconstruction_ok = reconstructs(m, dec.D, dec.B, tol);
  rep.rank_d_ok = rank(dec.D, tol) == r;
  rep.rank_m_ok = rank(m, tol) == r;
  for (std::size_t i = 0; i < m.cols(); ++i)
    if (support_size<T>(dec.B.col(i), tol) > inst.k()) rep.dense_columns.push_back(i);
  rep.sparsity_ok = rep.dense_columns.empty();
  if (rep.rank_d_ok) {
    const auto bases = hyperplane_bases(dec.D, tol);
    rep.support_consistent = true;
    for (std::size_t i = 0; i < m.cols() && rep.support_consistent; ++i)
      for (std::size_t j = 0; j < r; ++j)
        if (is_coefficient_zero<T>(dec.B.col(i), j, tol) && bases[j].independent_of_span(m.col(i))) {
          rep.support_consistent = false;
          break;
        }
  }
  return rep;
}

template <Scalar T>
std::vector<Subspace<T>> hyperplanes_of(const Matrix<T>& d, const Tolerance& tol) {
  const std::size_t r = d.cols();
  if (rank(d, tol) != r) throw Error(Errc::rank_deficient, "dictionary lacks full column rank");
  std::vector<Subspace<T>> out;
  out.reserve(r);
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < r; ++i) {
    others.clear();
    for (std::size_t c = 0; c < r; ++c)
      if (c != i) others.push_back(c);
    out.push_back(span_of(d.select_columns(others), tol));
  }
  return out;
}

template <Scalar T>
MembershipMatrix membership(const Instance<T>& inst, const Matrix<T>& d, const Tolerance& tol) {
  const auto& m = inst.data();
  if (d.rows() != m.rows() || d.cols() != inst.r()) throw Error(Errc::shape_mismatch, "dictionary shape mismatch");
  if (rank(d, tol) != d.cols()) throw Error(Errc::rank_deficient, "dictionary lacks full column rank");
  IncrementalBasis<T> full(d.rows(), tol);
  for (std::size_t c = 0; c < d.cols(); ++c) full.push(d.col(c));
  const auto bases = hyperplane_bases(d, tol);
  MembershipMatrix z(d.cols(), m.cols());
  for (std::size_t i = 0; i < m.cols(); ++i) {
    if (full.independent_of_span(m.col(i))) {
      throw Error(Errc::not_covered, "column " + std::to_string(i) + " lies outside span(D)");
    }
    for (std::size_t j = 0; j < d.cols(); ++j) z.set(j, i, !bases[j].independent_of_span(m.col(i)));
  }
  return z;
}

template <Scalar T>
Matrix<T> dictionary_from_hyperplanes(const std::vector<Subspace<T>>& fs, const Tolerance& tol) {
  const std::size_t r = fs.size();
  if (r < 2) throw Error(Errc::degenerate_arrangement, "need at least two hyperplanes");
  const std::size_t amb = fs.front().ambient_dim();
  for (const auto& f : fs)
    if (f.ambient_dim() != amb) throw Error(Errc::shape_mismatch, "hyperplanes live in different spaces");
  Matrix<T> d(amb, r);
  for (std::size_t i = 0; i < r; ++i) {
    std::optional<Subspace<T>> acc;
    for (std::size_t j = 0; j < r; ++j) {
      if (j == i) continue;
      acc = acc ? intersect(*acc, fs[j], tol) : fs[j];
    }
    if (acc->dim() != 1) {
      throw Error(Errc::degenerate_arrangement, "intersection for atom " + std::to_string(i) + " has dimension " +
                                                    std::to_string(acc->dim()));
    }
    auto col = d.col(i);
    std::copy(acc->basis().col(0).begin(), acc->basis().col(0).end(), col.begin());
    canonical_scale<T>(col, tol);
  }
  if (rank(d, tol) != r) throw Error(Errc::degenerate_arrangement, "recovered atoms are linearly dependent");
  return d;
}

template <Scalar T>
Matrix<T> canonical_dictionary(const Matrix<T>& d, const Tolerance& tol) {
  Matrix<T> out = d;
  for (std::size_t j = 0; j < out.cols(); ++j) canonical_scale<T>(out.col(j), tol);
  return out;
}

namespace {

template <Scalar T>
bool parallel_columns(std::span<const T> a, std::span<const T> b, const Tolerance& tol) {
  // Both inputs are canonically scaled.
  if constexpr (std::same_as<T, Rational>) {
    (void)tol;
    return std::equal(a.begin(), a.end(), b.begin());
  } else {
    const double eps = tol.is_exact() ? kDefaultRelEps : tol.rel_eps();
    double plus = 0.0;
    double minus = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      plus = std::max(plus, std::fabs(a[i] - b[i]));
      minus = std::max(minus, std::fabs(a[i] + b[i]));
    }
    return std::min(plus, minus) <= eps;
  }
}

}  // namespace

template <Scalar T>
std::optional<EquivalenceWitness<T>> essentially_equal(const Matrix<T>& d, const Matrix<T>& d2, const Tolerance& tol) {
  if (d.rows() != d2.rows() || d.cols() != d2.cols()) throw Error(Errc::shape_mismatch, "dictionaries differ in shape");
  const std::size_t r = d.cols();
  if (rank(d, tol) != r || rank(d2, tol) != r) throw Error(Errc::rank_deficient, "dictionary lacks full column rank");
  const Matrix<T> a = canonical_dictionary(d, tol);
  const Matrix<T> b = canonical_dictionary(d2, tol);
  EquivalenceWitness<T> w;
  w.permutation.assign(r, r);
  w.scales.assign(r, T(0));
  std::vector<bool> used(r, false);
  for (std::size_t i = 0; i < r; ++i) {
    std::size_t match = r;
    for (std::size_t j = 0; j < r; ++j) {
      if (!parallel_columns<T>(a.col(i), b.col(j), tol)) continue;
      if (match != r) throw Error(Errc::degenerate_arrangement, "column " + std::to_string(i) + " matches several atoms");
      match = j;
    }
    if (match == r) return std::nullopt;
    if (used[match]) throw Error(Errc::degenerate_arrangement, "two columns match the same atom");
    used[match] = true;
    w.permutation[i] = match;
    // scale = <d_i, d2_j> / <d2_j, d2_j>, exact when the columns are parallel.
    T num(0);
    T den(0);
    for (std::size_t row = 0; row < d.rows(); ++row) {
      num += d(row, i) * d2(row, match);
      den += d2(row, match) * d2(row, match);
    }
    w.scales[i] = num / den;
  }
  return w;
}

template <Scalar T>
Matrix<T> apply_witness(const Matrix<T>& d2, const EquivalenceWitness<T>& w) {
  Matrix<T> out(d2.rows(), w.permutation.size());
  for (std::size_t i = 0; i < w.permutation.size(); ++i)
    for (std::size_t row = 0; row < d2.rows(); ++row) out(row, i) = w.scales[i] * d2(row, w.permutation[i]);
  return out;
}

#define LRSCA_INSTANTIATE(T)                                                                                  \
  template class Instance<T>;                                                                                 \
  template std::size_t support_size<T>(std::span<const T>, const Tolerance&);                                 \
  template ValidationReport validate<T>(const Instance<T>&, const Decomposition<T>&, const Tolerance&);       \
  template std::vector<Subspace<T>> hyperplanes_of<T>(const Matrix<T>&, const Tolerance&);                    \
  template MembershipMatrix membership<T>(const Instance<T>&, const Matrix<T>&, const Tolerance&);            \
  template Matrix<T> dictionary_from_hyperplanes<T>(const std::vector<Subspace<T>>&, const Tolerance&);       \
  template Matrix<T> canonical_dictionary<T>(const Matrix<T>&, const Tolerance&);                             \
  template std::optional<EquivalenceWitness<T>> essentially_equal<T>(const Matrix<T>&, const Matrix<T>&,      \
                                                                     const Tolerance&);                       \
  template Matrix<T> apply_witness<T>(const Matrix<T>&, const EquivalenceWitness<T>&);

LRSCA_INSTANTIATE(Rational)
LRSCA_INSTANTIATE(double)

#undef LRSCA_INSTANTIATE

}  // namespace lrsca
