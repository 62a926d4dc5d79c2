#include "lrsca/oracle.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <unordered_set>

#include "lrsca/random.hpp"

namespace lrsca {

namespace {

using Mask = std::uint64_t;

struct Item {
  Mask mask = 0;
  bool free = false;
  Matrix<Rational> normals;  // one column when pinned; a basis of W^perp when free
};

bool on_plane(const std::vector<Rational>& normal, std::span<const Rational> x) {
  Rational dot = 0;
  for (std::size_t i = 0; i < x.size(); ++i) dot += normal[i] * x[i];
  return sgn(dot) == 0;
}

class CoverSearch {
 public:
  CoverSearch(const Instance<Rational>& inst, const OracleOptions& opts, OracleResult<Rational>& out)
      : inst_(inst), opts_(opts), out_(out), rng_(opts.seed), r_(inst.r()), ell_(inst.ell()), n_(inst.n()) {}

  void run() {
    red_ = reduce_to_rank_space(inst_.data(), tol_);
    collect_pinned();
    collect_free();
    out_.candidate_hyperplanes = pinned_count_;
    out_.free_flats = items_.size() - pinned_count_;
    cov_.assign(n_, 0);
    used_.assign(items_.size(), false);
    banned_.assign(items_.size(), false);
    dfs();
    finish();
  }

 private:
  const Matrix<Rational>& x() const { return red_.reduced; }

  // Spans of (r-1)-subsets of rank r-1, one item per distinct hyperplane.
  void collect_pinned() {
    std::unordered_set<Mask> seen;
    IncrementalBasis<Rational> basis(r_, tol_);
    std::vector<std::size_t> chosen;
    auto rec = [&](auto&& self, std::size_t start) -> void {
      if (chosen.size() == r_ - 1) {
        const Matrix<Rational> normal = nullspace(x().select_columns(chosen).transposed(), tol_);
        const std::vector<Rational> nv = normal.column(0);
        Mask mask = 0;
        for (std::size_t i = 0; i < n_; ++i)
          if (on_plane(nv, x().col(i))) mask |= Mask{1} << i;
        if (seen.insert(mask).second) items_.push_back(Item{mask, false, normal});
        return;
      }
      for (std::size_t c = start; c < n_; ++c) {
        if (basis.push(x().col(c))) {
          chosen.push_back(c);
          self(self, c + 1);
          chosen.pop_back();
        }
        basis.pop();
      }
    };
    rec(rec, 0);
    pinned_count_ = items_.size();
  }

  // Flats spanned by at most r-2 independent columns, including the zero flat.
  void collect_free() {
    std::unordered_set<Mask> seen;
    IncrementalBasis<Rational> basis(r_, tol_);
    std::vector<std::size_t> chosen;
    auto rec = [&](auto&& self, std::size_t start) -> void {
      Mask mask = 0;
      for (std::size_t i = 0; i < n_; ++i)
        if (!basis.independent_of_span(x().col(i))) mask |= Mask{1} << i;
      if (seen.insert(mask).second) {
        Matrix<Rational> perp = chosen.empty() ? Matrix<Rational>::identity(r_)
                                               : nullspace(x().select_columns(chosen).transposed(), tol_);
        if (chosen.empty()) zero_flat_ = items_.size();
        items_.push_back(Item{mask, true, std::move(perp)});
      }
      if (chosen.size() + 2 >= r_) return;
      for (std::size_t c = start; c < n_; ++c) {
        if (basis.push(x().col(c))) {
          chosen.push_back(c);
          self(self, c + 1);
          chosen.pop_back();
        }
        basis.pop();
      }
    };
    rec(rec, 0);
  }

  bool allowed(std::size_t item) const { return !banned_[item] && !(used_[item] && !items_[item].free); }

  // Upper bound on the deficit that `slots` more items can remove.
  bool hopeless(std::size_t slots, Mask deficient, std::size_t total_deficit) const {
    std::vector<std::size_t> gains;
    std::size_t best_free = 0;
    for (std::size_t a = 0; a < items_.size(); ++a) {
      if (!allowed(a)) continue;
      const auto g = static_cast<std::size_t>(std::popcount(items_[a].mask & deficient));
      if (items_[a].free) {
        best_free = std::max(best_free, g);
      } else if (g > 0) {
        gains.push_back(g);
      }
    }
    gains.insert(gains.end(), slots, best_free);
    const std::size_t take = std::min(slots, gains.size());
    std::partial_sort(gains.begin(), gains.begin() + static_cast<std::ptrdiff_t>(take), gains.end(), std::greater<>());
    std::size_t reach = 0;
    for (std::size_t t = 0; t < take; ++t) reach += gains[t];
    return reach < total_deficit;
  }

  void apply(std::size_t item, int sign) {
    const Mask m = items_[item].mask;
    for (std::size_t i = 0; i < n_; ++i)
      if (m >> i & 1) cov_[i] = static_cast<std::uint8_t>(cov_[i] + sign);
  }

  void dfs() {
    if (++out_.nodes > opts_.max_nodes) {
      throw Error(Errc::cap_exceeded, "oracle node budget of " + std::to_string(opts_.max_nodes) + " exhausted");
    }
    const std::size_t slots = r_ - chosen_.size();
    std::size_t first = n_;
    std::size_t total = 0;
    Mask deficient = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (cov_[i] >= ell_) continue;
      const std::size_t d = ell_ - cov_[i];
      if (d > slots) return;
      if (first == n_) first = i;
      total += d;
      deficient |= Mask{1} << i;
    }
    if (first == n_) {
      std::vector<std::size_t> cover = chosen_;
      cover.resize(r_, zero_flat_);
      evaluate(std::move(cover));
      return;
    }
    if (hopeless(slots, deficient, total)) return;

    std::vector<std::size_t> newly_banned;
    for (std::size_t a = 0; a < items_.size(); ++a) {
      if (!(items_[a].mask >> first & 1) || !allowed(a)) continue;
      const bool was_used = used_[a];
      used_[a] = true;
      chosen_.push_back(a);
      apply(a, +1);
      dfs();
      apply(a, -1);
      chosen_.pop_back();
      used_[a] = was_used;
      // Every cover containing `a` has been seen in this branch.
      banned_[a] = true;
      newly_banned.push_back(a);
    }
    for (auto a : newly_banned) banned_[a] = false;
  }

  std::vector<Rational> draw_normal(const Item& item) {
    if (!item.free) return item.normals.column(0);
    std::vector<Rational> v(r_, Rational(0));
    for (std::size_t c = 0; c < item.normals.cols(); ++c) {
      const Rational w = rng_.nonzero_rational();
      for (std::size_t i = 0; i < r_; ++i) v[i] += w * item.normals(i, c);
    }
    return v;
  }

  void evaluate(std::vector<std::size_t> cover) {
    std::sort(cover.begin(), cover.end());
    if (!seen_.insert(cover).second) return;
    const bool has_free = std::any_of(cover.begin(), cover.end(), [&](std::size_t a) { return items_[a].free; });
    const int tries = has_free ? 8 : 1;
    for (int attempt = 0; attempt < tries; ++attempt) {
      Matrix<Rational> nt(r_, r_);  // rows are hyperplane normals
      for (std::size_t j = 0; j < r_; ++j) {
        const auto v = draw_normal(items_[cover[j]]);
        for (std::size_t i = 0; i < r_; ++i) nt(j, i) = v[i];
      }
      if (rank(nt, tol_) != r_) continue;
      const Matrix<Rational> d_red = solve_coefficients(nt, Matrix<Rational>::identity(r_), tol_);
      Decomposition<Rational> dec;
      dec.D = canonical_dictionary(red_.lift * d_red, tol_);
      dec.B = solve_coefficients(dec.D, inst_.data(), tol_);
      if (!validate(inst_, dec, tol_).passed()) continue;
      record(std::move(dec), has_free);
      return;
    }
  }

  void record(Decomposition<Rational> dec, bool infinite) {
    if (infinite) {
      out_.free_hyperplane_flag = true;
      if (families_.size() < opts_.max_listed) families_.push_back(std::move(dec));
      return;
    }
    for (const auto& known : finite_)
      if (essentially_equal(known.D, dec.D, tol_)) return;
    finite_.push_back(std::move(dec));
  }

  static void sort_columns(Decomposition<Rational>& dec) {
    const std::size_t r = dec.D.cols();
    std::vector<std::size_t> order(r);
    for (std::size_t i = 0; i < r; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::lexicographical_compare(dec.D.col(a).begin(), dec.D.col(a).end(), dec.D.col(b).begin(),
                                          dec.D.col(b).end());
    });
    Matrix<Rational> b(r, dec.B.cols());
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t c = 0; c < dec.B.cols(); ++c) b(i, c) = dec.B(order[i], c);
    dec.D = dec.D.select_columns(order);
    dec.B = std::move(b);
  }

  static bool dictionary_less(const Decomposition<Rational>& a, const Decomposition<Rational>& b) {
    for (std::size_t c = 0; c < a.D.cols(); ++c) {
      const auto x = a.D.col(c);
      const auto y = b.D.col(c);
      if (std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end())) return true;
      if (std::lexicographical_compare(y.begin(), y.end(), x.begin(), x.end())) return false;
    }
    return false;
  }

  void finish() {
    for (auto* list : {&finite_, &families_}) {
      for (auto& dec : *list) sort_columns(dec);
      std::sort(list->begin(), list->end(), dictionary_less);
    }
    if (out_.free_hyperplane_flag) {
      out_.count.reset();
    } else {
      out_.count = finite_.size();
    }
    for (auto* list : {&finite_, &families_})
      for (auto& dec : *list)
        if (out_.decompositions.size() < opts_.max_listed) out_.decompositions.push_back(std::move(dec));
  }

  const Instance<Rational>& inst_;
  const OracleOptions& opts_;
  OracleResult<Rational>& out_;
  Tolerance tol_ = Tolerance::exact();
  Rng rng_;
  std::size_t r_;
  std::size_t ell_;
  std::size_t n_;
  RankReduction<Rational> red_;
  std::vector<Item> items_;
  std::size_t pinned_count_ = 0;
  std::size_t zero_flat_ = 0;
  std::vector<std::uint8_t> cov_;
  std::vector<bool> used_;
  std::vector<bool> banned_;
  std::vector<std::size_t> chosen_;
  std::set<std::vector<std::size_t>> seen_;
  std::vector<Decomposition<Rational>> finite_;
  std::vector<Decomposition<Rational>> families_;
};

}  // namespace

template <Scalar T>
OracleResult<T> enumerate_decompositions(const Instance<T>& inst, const OracleOptions& opts) {
  if constexpr (backend_of<T> != Backend::exact) {
    (void)inst;
    (void)opts;
    throw Error(Errc::exact_backend_required, "the decomposition oracle runs on exact rational data only");
  } else {
    if (inst.r() > kOracleMaxR) throw Error(Errc::cap_exceeded, "oracle supports r <= 4");
    if (inst.n() > kOracleMaxN) throw Error(Errc::cap_exceeded, "oracle supports n <= 40");
    OracleResult<Rational> out;
    if (inst.data().is_zero() || rank(inst.data(), Tolerance::exact()) != inst.r()) {
      out.count = 0;
      return out;
    }
    CoverSearch(inst, opts, out).run();
    return out;
  }
}

template <Scalar T>
bool is_essentially_unique(const Instance<T>& inst, const OracleOptions& opts) {
  return enumerate_decompositions(inst, opts).unique();
}

template OracleResult<Rational> enumerate_decompositions<Rational>(const Instance<Rational>&, const OracleOptions&);
template OracleResult<double> enumerate_decompositions<double>(const Instance<double>&, const OracleOptions&);
template bool is_essentially_unique<Rational>(const Instance<Rational>&, const OracleOptions&);
template bool is_essentially_unique<double>(const Instance<double>&, const OracleOptions&);

}  // namespace lrsca
