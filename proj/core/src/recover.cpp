#include "lrsca/recover.hpp"

#include <algorithm>

#include "lrsca/certify.hpp"

namespace lrsca {

std::size_t peeling_stage_bound(std::size_t r, std::size_t k, std::size_t stage) {
  if (k < 1 || k >= r) throw Error(Errc::invalid_params, "need 1 <= k < r");
  if (stage < 1 || stage > r) throw Error(Errc::invalid_params, "stage out of range");
  const std::size_t bound = (r - stage + 1) * (r - 2) / (r - k) + 1;
  return std::max(bound, r - 1);
}

namespace {

void check_config(const RecoveryConfig& cfg) {
  if (cfg.r < 2) throw Error(Errc::invalid_params, "recovery needs r >= 2");
  if (cfg.k < 1 || cfg.k >= cfg.r) throw Error(Errc::invalid_params, "recovery needs 1 <= k < r");
  if (cfg.max_subsets == 0) throw Error(Errc::invalid_params, "max_subsets must be positive");
}

template <Scalar T>
struct Reduced {
  RankReduction<T> red;
  std::vector<Subspace<T>> planes;  // found hyperplanes in r-space
};

// Lexicographic DFS over subsets of `active` of size p whose span stays
// within r-1 dimensions. Appends at most `want` new hyperplanes.
template <Scalar T>
class StageSearch {
 public:
  StageSearch(const Matrix<T>& m, Reduced<T>& ctx, const RecoveryConfig& cfg, HyperplaneSearch<T>& out)
      : m_(m), ctx_(ctx), cfg_(cfg), out_(out), basis_(cfg.r, cfg.tol) {}

  void run(const std::vector<std::size_t>& active, std::size_t p, std::size_t want) {
    active_ = &active;
    p_ = p;
    target_ = out_.found.size() + want;
    chosen_.clear();
    if (active.size() < p) return;
    dfs(0);
  }

 private:
  const Matrix<T>& x() const { return ctx_.red.reduced; }

  bool done() const { return out_.cap_exceeded || out_.found.size() >= target_; }

  bool known_plane() const {
    for (const auto& plane : ctx_.planes) {
      bool inside = true;
      for (auto c : chosen_)
        if (!contains(plane, x().col(c), cfg_.tol)) {
          inside = false;
          break;
        }
      if (inside) return true;
    }
    return false;
  }

  void accept() {
    const std::size_t r = cfg_.r;
    const Matrix<T> pts = x().select_columns(chosen_);
    if (spark(pts, cfg_.tol, cfg_.spark) != r) return;
    Subspace<T> plane = span_of(pts, cfg_.tol);
    if (plane.dim() != r - 1) return;
    FoundHyperplane<T> hit{span_of(m_.select_columns(chosen_), cfg_.tol), chosen_, {}};
    for (std::size_t i = 0; i < x().cols(); ++i)
      if (contains(plane, x().col(i), cfg_.tol)) hit.incident.push_back(i);
    ctx_.planes.push_back(std::move(plane));
    out_.found.push_back(std::move(hit));
  }

  void dfs(std::size_t start) {
    if (++out_.subsets_visited > cfg_.max_subsets) {
      out_.cap_exceeded = true;
      return;
    }
    if (chosen_.size() == p_) {
      accept();
      return;
    }
    const auto& act = *active_;
    const std::size_t r = cfg_.r;
    for (std::size_t t = start; t < act.size() && !done(); ++t) {
      if (chosen_.size() + (act.size() - t) < p_) break;
      const std::size_t c = act[t];
      const bool raised = basis_.push(x().col(c));
      // Below r-1 points every point must add a dimension (spark r forbids a
      // dependent set that small); after that none may.
      const bool ok = chosen_.size() < r - 1 ? raised : !raised;
      if (ok) {
        chosen_.push_back(c);
        const bool pruned = chosen_.size() == r - 1 && known_plane();
        if (!pruned) dfs(t + 1);
        chosen_.pop_back();
      }
      basis_.pop();
      // A found hyperplane may cover the rest of the current prefix.
      if (!chosen_.empty() && chosen_.size() >= r - 1 && known_plane()) break;
    }
  }

  const Matrix<T>& m_;
  Reduced<T>& ctx_;
  const RecoveryConfig& cfg_;
  HyperplaneSearch<T>& out_;
  IncrementalBasis<T> basis_;
  const std::vector<std::size_t>* active_ = nullptr;
  std::size_t p_ = 0;
  std::size_t target_ = 0;
  std::vector<std::size_t> chosen_;
};

template <Scalar T>
Reduced<T> prepare(const Matrix<T>& m, const RecoveryConfig& cfg) {
  check_config(cfg);
  if (m.cols() == 0 || m.is_zero()) throw Error(Errc::invalid_params, "recovery needs a nonzero data matrix");
  if (rank(m, cfg.tol) != cfg.r) throw Error(Errc::invalid_params, "rank(M) differs from r");
  return Reduced<T>{reduce_to_rank_space(m, cfg.tol), {}};
}

std::vector<std::size_t> all_columns(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace

template <Scalar T>
HyperplaneSearch<T> find_certified_hyperplanes(const Matrix<T>& m, const RecoveryConfig& cfg) {
  Reduced<T> ctx = prepare(m, cfg);
  HyperplaneSearch<T> out;
  StageSearch<T> search(m, ctx, cfg, out);
  search.run(all_columns(m.cols()), lemma2_bound(cfg.r, cfg.k), cfg.r);
  return out;
}

template <Scalar T>
Recovery<T> recover(const Matrix<T>& m, const RecoveryConfig& cfg) {
  Reduced<T> ctx = prepare(m, cfg);
  const std::size_t r = cfg.r;
  HyperplaneSearch<T> out;
  StageSearch<T> search(m, ctx, cfg, out);

  if (cfg.strategy == RecoveryStrategy::simultaneous) {
    search.run(all_columns(m.cols()), lemma2_bound(r, cfg.k), r);
  } else {
    std::vector<std::size_t> active = all_columns(m.cols());
    for (std::size_t stage = 1; stage <= r && !out.cap_exceeded; ++stage) {
      const std::size_t before = out.found.size();
      search.run(active, peeling_stage_bound(r, cfg.k, stage), 1);
      if (out.found.size() == before) break;
      const auto& incident = out.found.back().incident;
      std::erase_if(active, [&](std::size_t c) { return std::binary_search(incident.begin(), incident.end(), c); });
    }
  }

  if (out.found.size() < r) {
    if (out.cap_exceeded) {
      throw Error(Errc::cap_exceeded, "subset budget exhausted after " + std::to_string(out.found.size()) +
                                          " certified hyperplanes");
    }
    throw Error(Errc::not_identified,
                "only " + std::to_string(out.found.size()) + " of " + std::to_string(r) + " hyperplanes certified");
  }

  Matrix<T> d_red;
  try {
    d_red = dictionary_from_hyperplanes(ctx.planes, cfg.tol);
  } catch (const Error& e) {
    throw Error(Errc::invalid_decomposition, std::string("certified hyperplanes do not form a dictionary: ") + e.what());
  }
  Decomposition<T> dec;
  dec.D = canonical_dictionary(ctx.red.lift * d_red, cfg.tol);
  try {
    dec.B = solve_coefficients(dec.D, m, cfg.tol);
  } catch (const Error& e) {
    throw Error(Errc::invalid_decomposition, std::string("cannot solve for B: ") + e.what());
  }
  const ValidationReport report = validate(Instance<T>(m, r, cfg.k), dec, cfg.tol);
  if (!report.passed()) throw Error(Errc::invalid_decomposition, report.summary());
  return Recovery<T>{std::move(dec), std::move(out.found), out.subsets_visited};
}

#define LRSCA_INSTANTIATE(T)                                                                        \
  template HyperplaneSearch<T> find_certified_hyperplanes<T>(const Matrix<T>&, const RecoveryConfig&); \
  template Recovery<T> recover<T>(const Matrix<T>&, const RecoveryConfig&);

LRSCA_INSTANTIATE(Rational)
LRSCA_INSTANTIATE(double)

#undef LRSCA_INSTANTIATE

}  // namespace lrsca
