#include "lrsca/certify.hpp"

#include <algorithm>
#include <numeric>

namespace lrsca {

std::string_view theorem_name(TheoremTag tag) {
  switch (tag) {
    case TheoremTag::lemma2: return "lemma2";
    case TheoremTag::thm1: return "thm1";
    case TheoremTag::seq: return "seq";
    case TheoremTag::cor2: return "cor2";
  }
  return "unknown";
}

namespace {

void check_rk(std::size_t r, std::size_t k) {
  if (!(1 <= k && k < r)) {
    throw Error(Errc::invalid_params, "bounds need 1 <= k < r (r=" + std::to_string(r) + ", k=" + std::to_string(k) + ")");
  }
}

}  // namespace

std::size_t lemma2_bound(std::size_t r, std::size_t k) {
  check_rk(r, k);
  return r * (r - 2) / (r - k) + 1;
}

std::size_t minimum_total_points(std::size_t r, std::size_t k) {
  const std::size_t num = r * lemma2_bound(r, k);
  const std::size_t den = r - k;
  return (num + den - 1) / den;
}

std::size_t sequential_bound(std::size_t r, std::size_t k, std::size_t position, std::size_t c_sum) {
  check_rk(r, k);
  if (position < 1 || position > r) throw Error(Errc::invalid_params, "position must lie in 1..r");
  return ((r - position + 1) * (r - 2) + c_sum) / (r - k) + 1;
}

std::size_t corollary2_bound(std::size_t r, std::size_t position) {
  if (position < 1 || position > r) throw Error(Errc::invalid_params, "position must lie in 1..r");
  return (r - position + 1) * (r - 2) + 1;
}

CTable c_table(const MembershipMatrix& z, std::span<const std::size_t> ordering) {
  CTable table;
  for (std::size_t pos = 0; pos < ordering.size(); ++pos) {
    const std::size_t j = ordering[pos];
    for (std::size_t i : z.index_set(j)) {
      std::size_t c = 0;
      for (std::size_t q = 0; q < pos; ++q)
        if (z(ordering[q], i)) ++c;
      table[{i, j}] = c;
    }
  }
  return table;
}

namespace {

struct BoundTerms {
  std::size_t bound;
  std::size_t numerator;
  std::size_t denominator;
};

BoundTerms bound_terms(TheoremTag tag, std::size_t r, std::size_t k, std::size_t position, std::size_t c_sum) {
  switch (tag) {
    case TheoremTag::lemma2:
    case TheoremTag::thm1: return {lemma2_bound(r, k), r * (r - 2), r - k};
    case TheoremTag::seq:
      return {sequential_bound(r, k, position, c_sum), (r - position + 1) * (r - 2) + c_sum, r - k};
    case TheoremTag::cor2: return {corollary2_bound(r, position), (r - position + 1) * (r - 2), 1};
  }
  return {0, 0, 1};
}

template <Scalar T>
bool spark_is_r(const Matrix<T>& m, std::span<const std::size_t> idx, std::size_t r, const Tolerance& tol,
                const CertifyOptions& opts) {
  if (idx.empty()) return false;
  return spark(m.select_columns(idx), tol, opts.spark) == r;
}

// Advances idx to the next size-|idx| combination of {0..n-1} in
// lexicographic order; false when exhausted.
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t s = idx.size();
  for (std::size_t t = s; t-- > 0;) {
    if (idx[t] < n - s + t) {
      ++idx[t];
      for (std::size_t u = t + 1; u < s; ++u) idx[u] = idx[u - 1] + 1;
      return true;
    }
  }
  return false;
}

// Tests hyperplane h at a position of an ordering. `before` flags the
// hyperplanes already processed; it is all-false for the simultaneous rule.
template <Scalar T>
std::optional<HyperplaneCert<T>> evaluate_hyperplane(const Instance<T>& inst, const MembershipMatrix& z, std::size_t h,
                                                     std::size_t position, const std::vector<bool>& before,
                                                     TheoremTag tag, const Tolerance& tol, const CertifyOptions& opts) {
  const std::size_t r = inst.r();
  const std::size_t k = inst.k();
  const std::size_t ell = r - k;
  const auto& m = inst.data();

  std::vector<std::size_t> members;
  std::vector<std::size_t> cvals;
  std::vector<std::size_t> pruned;
  for (std::size_t i : z.index_set(h)) {
    std::size_t c = 0;
    for (std::size_t q = 0; q < r; ++q)
      if (before[q] && z(q, i)) ++c;
    if (tag != TheoremTag::thm1 && opts.prune && c >= ell) {
      pruned.push_back(i);
      continue;
    }
    members.push_back(i);
    cvals.push_back(c);
  }
  if (members.empty()) return std::nullopt;

  auto make_cert = [&](std::vector<std::size_t> chosen, std::size_t c_sum, const BoundTerms& bt, bool subset) {
    HyperplaneCert<T> cert;
    cert.tag = tag;
    cert.hyperplane = h;
    cert.position = position;
    cert.subspace = span_of(m.select_columns(chosen), tol);
    cert.index_set = std::move(chosen);
    cert.spark_value = r;
    cert.bound_used = bt.bound;
    cert.numerator = bt.numerator;
    cert.denominator = bt.denominator;
    cert.c_sum = c_sum;
    cert.pruned = pruned;
    cert.from_subset_search = subset;
    return cert;
  };

  const std::size_t full_c = std::accumulate(cvals.begin(), cvals.end(), std::size_t{0});
  const BoundTerms full = bound_terms(tag, r, k, position, full_c);
  const bool full_count_ok = members.size() >= full.bound;
  if (full_count_ok && spark_is_r(m, members, r, tol, opts)) return make_cert(members, full_c, full, false);

  // Maximal set failed; look for a spark-r subset meeting its own bound.
  const BoundTerms floor_terms = bound_terms(tag, r, k, position, 0);
  const std::size_t min_size = std::max(r - 1, floor_terms.bound);
  const std::size_t max_size =
      (tag == TheoremTag::seq) ? members.size() - 1 : std::min(floor_terms.bound, members.size() - 1);
  if (members.size() < 2 || min_size > max_size) return std::nullopt;
  std::size_t examined = 0;
  for (std::size_t s = min_size; s <= max_size; ++s) {
    std::vector<std::size_t> pick(s);
    std::iota(pick.begin(), pick.end(), std::size_t{0});
    do {
      if (++examined > opts.subset_search_cap) return std::nullopt;
      std::size_t c_sum = 0;
      std::vector<std::size_t> chosen;
      for (auto t : pick) {
        chosen.push_back(members[t]);
        c_sum += cvals[t];
      }
      const BoundTerms bt = bound_terms(tag, r, k, position, c_sum);
      if (s >= bt.bound && spark_is_r(m, chosen, r, tol, opts)) return make_cert(std::move(chosen), c_sum, bt, true);
    } while (next_combination(pick, members.size()));
  }
  return std::nullopt;
}

template <Scalar T>
void check_consistent(const Instance<T>& inst, const MembershipMatrix& z) {
  if (z.hyperplanes() != inst.r() || z.points() != inst.n()) {
    throw Error(Errc::shape_mismatch, "membership matrix does not match the instance");
  }
}

template <Scalar T>
std::optional<Certificate<T>> ordered_search(const Instance<T>& inst, const MembershipMatrix& z, TheoremTag tag,
                                             const Tolerance& tol, const CertifyOptions& opts) {
  check_consistent(inst, z);
  const std::size_t r = inst.r();
  Certificate<T> cert;
  cert.method = tag;
  cert.r = r;
  cert.k = inst.k();

  const bool exhaustive = opts.strategy == OrderingStrategy::exhaustive && r <= opts.exhaustive_max_r;
  if (!exhaustive) {
    std::vector<std::size_t> order(r);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return z.index_set(a).size() > z.index_set(b).size();
    });
    std::vector<bool> before(r, false);
    for (std::size_t pos = 0; pos < r; ++pos) {
      auto hc = evaluate_hyperplane(inst, z, order[pos], pos + 1, before, tag, tol, opts);
      if (!hc) return std::nullopt;
      cert.per_hyperplane.push_back(std::move(*hc));
      before[order[pos]] = true;
    }
    cert.ordering = order;
    cert.c_table = c_table(z, cert.ordering);
    return cert;
  }

  // Depth-first over prefixes in ascending hyperplane order, so the first
  // complete ordering is the lexicographically smallest certifying one. The
  // outcome at a position depends only on the set of earlier hyperplanes.
  std::map<std::pair<std::size_t, std::vector<bool>>, std::optional<HyperplaneCert<T>>> memo;
  std::vector<bool> before(r, false);
  std::vector<std::size_t> order;
  std::vector<HyperplaneCert<T>> stack;

  auto dfs = [&](auto&& self) -> bool {
    if (order.size() == r) return true;
    for (std::size_t h = 0; h < r; ++h) {
      if (before[h]) continue;
      const auto key = std::make_pair(h, before);
      auto it = memo.find(key);
      if (it == memo.end())
        it = memo.emplace(key, evaluate_hyperplane(inst, z, h, order.size() + 1, before, tag, tol, opts)).first;
      if (!it->second) continue;
      before[h] = true;
      order.push_back(h);
      stack.push_back(*it->second);
      if (self(self)) return true;
      stack.pop_back();
      order.pop_back();
      before[h] = false;
    }
    return false;
  };
  if (!dfs(dfs)) return std::nullopt;
  cert.per_hyperplane = std::move(stack);
  cert.ordering = order;
  cert.c_table = c_table(z, cert.ordering);
  return cert;
}

}  // namespace

template <Scalar T>
std::optional<HyperplaneCert<T>> certify_hyperplane(const Matrix<T>& points, std::size_t r, std::size_t k,
                                                    const Tolerance& tol, const CertifyOptions& opts) {
  if (points.cols() == 0) throw Error(Errc::invalid_params, "no points to certify");
  const std::size_t bound = lemma2_bound(r, k);
  if (points.cols() < bound) return std::nullopt;
  if (rank(points, tol) != r - 1) return std::nullopt;
  if (spark(points, tol, opts.spark) != r) return std::nullopt;
  HyperplaneCert<T> cert;
  cert.tag = TheoremTag::lemma2;
  cert.index_set.resize(points.cols());
  std::iota(cert.index_set.begin(), cert.index_set.end(), std::size_t{0});
  cert.subspace = span_of(points, tol);
  cert.spark_value = r;
  cert.bound_used = bound;
  cert.numerator = r * (r - 2);
  cert.denominator = r - k;
  return cert;
}

template <Scalar T>
std::optional<Certificate<T>> certify_theorem1(const Instance<T>& inst, const MembershipMatrix& z,
                                               const Tolerance& tol, const CertifyOptions& opts) {
  check_consistent(inst, z);
  Certificate<T> cert;
  cert.method = TheoremTag::thm1;
  cert.r = inst.r();
  cert.k = inst.k();
  const std::vector<bool> none(inst.r(), false);
  for (std::size_t j = 0; j < inst.r(); ++j) {
    auto hc = evaluate_hyperplane(inst, z, j, 0, none, TheoremTag::thm1, tol, opts);
    if (!hc) return std::nullopt;
    cert.per_hyperplane.push_back(std::move(*hc));
  }
  return cert;
}

template <Scalar T>
std::optional<Certificate<T>> certify_sequential(const Instance<T>& inst, const MembershipMatrix& z,
                                                 const Tolerance& tol, const CertifyOptions& opts) {
  return ordered_search(inst, z, TheoremTag::seq, tol, opts);
}

template <Scalar T>
std::optional<Certificate<T>> certify_corollary2(const Instance<T>& inst, const MembershipMatrix& z,
                                                 const Tolerance& tol, const CertifyOptions& opts) {
  CertifyOptions pruned = opts;
  pruned.prune = true;
  return ordered_search(inst, z, TheoremTag::cor2, tol, pruned);
}

template <Scalar T>
std::optional<Certificate<T>> certify_ordering(const Instance<T>& inst, const MembershipMatrix& z, TheoremTag tag,
                                               std::span<const std::size_t> ordering, const Tolerance& tol,
                                               const CertifyOptions& opts) {
  check_consistent(inst, z);
  if (tag != TheoremTag::seq && tag != TheoremTag::cor2) {
    throw Error(Errc::invalid_params, "orderings apply to the seq and cor2 tests only");
  }
  const std::size_t r = inst.r();
  std::vector<bool> before(r, false);
  if (ordering.size() != r) throw Error(Errc::invalid_params, "ordering must list every hyperplane once");
  for (auto h : ordering) {
    if (h >= r || before[h]) throw Error(Errc::invalid_params, "ordering must list every hyperplane once");
    before[h] = true;
  }
  CertifyOptions local = opts;
  if (tag == TheoremTag::cor2) local.prune = true;
  Certificate<T> cert;
  cert.method = tag;
  cert.r = r;
  cert.k = inst.k();
  std::fill(before.begin(), before.end(), false);
  for (std::size_t pos = 0; pos < r; ++pos) {
    auto hc = evaluate_hyperplane(inst, z, ordering[pos], pos + 1, before, tag, tol, local);
    if (!hc) return std::nullopt;
    cert.per_hyperplane.push_back(std::move(*hc));
    before[ordering[pos]] = true;
  }
  cert.ordering.assign(ordering.begin(), ordering.end());
  cert.c_table = c_table(z, cert.ordering);
  return cert;
}

#define LRSCA_INSTANTIATE(T)                                                                                    \
  template std::optional<HyperplaneCert<T>> certify_hyperplane<T>(const Matrix<T>&, std::size_t, std::size_t,   \
                                                                  const Tolerance&, const CertifyOptions&);    \
  template std::optional<Certificate<T>> certify_theorem1<T>(const Instance<T>&, const MembershipMatrix&,       \
                                                             const Tolerance&, const CertifyOptions&);         \
  template std::optional<Certificate<T>> certify_sequential<T>(const Instance<T>&, const MembershipMatrix&,     \
                                                               const Tolerance&, const CertifyOptions&);       \
  template std::optional<Certificate<T>> certify_corollary2<T>(const Instance<T>&, const MembershipMatrix&,     \
                                                               const Tolerance&, const CertifyOptions&);       \
  template std::optional<Certificate<T>> certify_ordering<T>(const Instance<T>&, const MembershipMatrix&,       \
                                                             TheoremTag, std::span<const std::size_t>,          \
                                                             const Tolerance&, const CertifyOptions&);

LRSCA_INSTANTIATE(Rational)
LRSCA_INSTANTIATE(double)

#undef LRSCA_INSTANTIATE

}  // namespace lrsca
