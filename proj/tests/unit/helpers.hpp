#pragma once

#include <initializer_list>
#include <vector>

#include "lrsca/linalg.hpp"
#include "lrsca/random.hpp"

namespace testing {

using lrsca::Matrix;
using lrsca::Rational;
using Q = Rational;

// Reduced fraction; mpq_class arithmetic requires canonical operands.
inline Q frac(long num, long den) {
  Q q(num, den);
  q.canonicalize();
  return q;
}

inline Matrix<Q> qmat(std::initializer_list<std::initializer_list<long>> rows) {
  std::vector<std::vector<Q>> out;
  for (const auto& row : rows) {
    std::vector<Q> r;
    for (long v : row) r.emplace_back(v);
    out.push_back(std::move(r));
  }
  return Matrix<Q>::from_rows(out);
}

inline Matrix<Q> random_qmat(lrsca::Rng& rng, std::size_t rows, std::size_t cols, long bound = 5) {
  Matrix<Q> m(rows, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = Q(rng.uniform_int(-bound, bound));
  return m;
}

// Plain fraction Gaussian elimination, kept separate from the library so it
// can act as an oracle.
inline std::size_t naive_rank(const Matrix<Q>& m) {
  std::vector<std::vector<Q>> a(m.rows(), std::vector<Q>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = m(i, j);
  std::size_t rank = 0;
  for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
    std::size_t piv = rank;
    while (piv < m.rows() && a[piv][c] == 0) ++piv;
    if (piv == m.rows()) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == rank || a[i][c] == 0) continue;
      const Q f = a[i][c] / a[rank][c];
      for (std::size_t j = c; j < m.cols(); ++j) a[i][j] -= f * a[rank][j];
    }
    ++rank;
  }
  return rank;
}

// Smallest dependent subset size by enumerating bitmasks.
inline std::size_t naive_spark(const Matrix<Q>& m) {
  const std::size_t n = m.cols();
  std::size_t best = n + 1;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    const auto size = static_cast<std::size_t>(__builtin_popcount(mask));
    if (size >= best) continue;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) idx.push_back(i);
    if (naive_rank(m.select_columns(idx)) < size) best = size;
  }
  return best;
}

inline Matrix<Q> random_invertible(lrsca::Rng& rng, std::size_t n) {
  for (;;) {
    Matrix<Q> a = random_qmat(rng, n, n, 4);
    if (naive_rank(a) == n) return a;
  }
}

}  // namespace testing
