#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include <unistd.h>

#include "cli.hpp"
#include "lrsca/io.hpp"
#include "properties.hpp"

namespace fs = std::filesystem;
using namespace lrsca;
using testing::Q;

namespace {

const Tolerance kExact = Tolerance::exact();

struct Run {
  int code;
  std::string out;
};

Run tool(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str()};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Fails the criterion with a message when cond is false.
struct Check {
  std::string detail;
  bool ok = true;
  void operator()(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

RecoveryConfig config(std::size_t r, std::size_t k, RecoveryStrategy s) {
  RecoveryConfig cfg;
  cfg.r = r;
  cfg.k = k;
  cfg.strategy = s;
  return cfg;
}

bool all_certifiers_fail(const Instance<Q>& inst, const MembershipMatrix& z) {
  CertifyOptions unpruned;
  unpruned.prune = false;
  return !certify_theorem1(inst, z, kExact) && !certify_sequential(inst, z, kExact) &&
         !certify_corollary2(inst, z, kExact) && !certify_sequential(inst, z, kExact, unpruned) &&
         !certify_corollary2(inst, z, kExact, unpruned);
}

bool hyperplane_found(const HyperplaneSearch<Q>& search, const Subspace<Q>& f) {
  for (const auto& h : search.found)
    if (same_subspace(h.subspace, f, kExact)) return true;
  return false;
}

void ac1(Check& check, const fs::path& dir) {
  const auto file = (dir / "ce3.json").string();
  check(tool({"gen", "--mode", "counterexample", "--r", "3", "--seed", "7", "--out", file}).code == 0, "gen failed");
  if (!check.ok) return;
  const auto f = parse_instance_file<Q>(slurp(file));
  check(f.M.cols() == 9, "n != 9");
  check(f.D.has_value() && f.alternatives.size() == 1, "missing dictionaries");
  if (!check.ok) return;
  const auto inst = f.instance();
  for (const auto* d : {&*f.D, &f.alternatives[0].D}) {
    const auto z = membership(inst, *d, kExact);
    for (std::size_t j = 0; j < 3; ++j) check(z.index_set(j).size() == 3, "hyperplane without 3 points");
  }
  const auto oracle = tool({"oracle", file});
  check(oracle.out == "2\n", "oracle printed " + oracle.out);
  const auto res = enumerate_decompositions(inst);
  check(res.count && *res.count == 2, "oracle count != 2");
  for (const auto& dec : res.decompositions) check(validate(inst, dec, kExact).passed(), "decomposition invalid");
  check(testing::listed(res, *f.D) && testing::listed(res, f.alternatives[0].D), "planted pair not listed");
}

void ac2(Check& check) {
  const auto ce = counterexample<Q>(4, 7);
  check(ce.instance.n() == 32, "n != 32");
  for (const auto* dec : {&ce.first, &ce.second}) {
    check(validate(ce.instance, *dec, kExact).passed(), "decomposition invalid");
    const auto z = membership(ce.instance, dec->D, kExact);
    for (std::size_t j = 0; j < 4; ++j) {
      const auto idx = z.index_set(j);
      check(idx.size() == 8, "hyperplane without 8 points");
      check(spark(ce.instance.data().select_columns(idx), kExact) == 4, "spark != 4");
    }
    check(all_certifiers_fail(ce.instance, z), "a certifier succeeded");
  }
  check(!essentially_equal(ce.first.D, ce.second.D, kExact), "dictionaries essentially equal");
}

void ac3(Check& check, const fs::path& dir) {
  const auto file = (dir / "st3.json").string();
  const auto ffile = (dir / "st3f.json").string();
  check(tool({"gen", "--mode", "staircase", "--r", "3", "--seed", "1", "--out", file}).code == 0, "gen failed");
  check(tool({"gen", "--mode", "staircase", "--r", "3", "--seed", "1", "--backend", "float", "--out", ffile}).code == 0,
        "float gen failed");
  if (!check.ok) return;
  const auto f = parse_instance_file<Q>(slurp(file));
  check(f.M.cols() == 9 && f.generator_counts == std::vector<std::size_t>{4, 3, 2}, "counts differ from 4,3,2");
  check(tool({"certify", file, "--method", "seq"}).code == 0, "seq exit != 0");
  check(tool({"certify", file, "--method", "thm1"}).code == 1, "thm1 exit != 1");
  const auto inst = f.instance();
  const auto z = membership(inst, *f.D, kExact);
  const std::vector<std::size_t> order{0, 1, 2};
  check(certify_ordering(inst, z, TheoremTag::seq, order, kExact).has_value(), "ordering 1,2,3 not certified");
  check(tool({"oracle", file}).out == "1\n", "oracle count != 1");
  const auto rec = recover(inst.data(), config(3, 2, RecoveryStrategy::sequential));
  check(essentially_equal(rec.decomposition.D, *f.D, kExact).has_value(), "exact recovery differs");
  const auto ff = parse_instance_file<double>(slurp(ffile));
  auto cfg = config(3, 2, RecoveryStrategy::sequential);
  cfg.tol = Tolerance::relative();
  const auto recf = recover(ff.M, cfg);
  check(essentially_equal(recf.decomposition.D, *ff.D, Tolerance::relative(1e-6)).has_value(),
        "float recovery differs");
}

void ac4(Check& check) {
  for (std::uint64_t seed = 1; seed <= 100 && check.ok; ++seed) {
    const auto p = planted_instance<Q>(GenSpec{4, 3, {9, 9, 9, 9}, seed, 0});
    const auto z = membership(p.instance, p.truth.D, kExact);
    check(certify_theorem1(p.instance, z, kExact).has_value(), "no thm1 certificate, seed " + std::to_string(seed));
    for (auto s : {RecoveryStrategy::simultaneous, RecoveryStrategy::sequential}) {
      try {
        const auto rec = recover(p.instance.data(), config(4, 3, s));
        check(essentially_equal(rec.decomposition.D, p.truth.D, kExact).has_value(),
              "wrong dictionary, seed " + std::to_string(seed));
      } catch (const Error& e) {
        check(false, std::string("recovery error: ") + e.what() + ", seed " + std::to_string(seed));
      }
    }
  }
}

void ac5(Check& check) {
  check(lemma2_bound(3, 2) == 4, "lemma2_bound(3,2)");
  check(lemma2_bound(4, 3) == 9, "lemma2_bound(4,3)");
  for (std::size_t r = 3; r <= 8; ++r)
    check(minimum_total_points(r, r - 1) == r * r * r - 2 * r * r + r, "k = r-1 total, r = " + std::to_string(r));
  for (std::size_t r = 2; r <= 8; ++r) check(minimum_total_points(r, 1) == r, "k = 1 total, r = " + std::to_string(r));
}

void ac6(Check& check) {
  for (std::size_t r : {3, 4}) {
    const auto p = planted_instance<Q>(GenSpec{r, 1, std::vector<std::size_t>(r, 1), 1, 0});
    check(p.instance.n() == r, "n != r");
    const auto z = membership(p.instance, p.truth.D, kExact);
    check(certify_theorem1(p.instance, z, kExact).has_value(), "no thm1 certificate, r = " + std::to_string(r));
    check(enumerate_decompositions(p.instance).unique(), "oracle count != 1, r = " + std::to_string(r));
  }
}

void ac7(Check& check) {
  using Suite = std::function<testing::SuiteResult(std::size_t, std::uint64_t)>;
  const std::vector<std::pair<std::string, Suite>> suites{
      {"spark invariances", testing::spark_invariance_suite},
      {"equivalence relation", testing::equivalence_suite},
      {"round trip", testing::round_trip_suite},
      {"certifier dominance", testing::dominance_suite},
      {"oracle agreement", testing::oracle_agreement_suite},
  };
  for (const auto& [name, suite] : suites) {
    const auto res = suite(200, 2024);
    check(res.cases >= 200, name + " ran too few cases");
    check(res.violations == 0, name + ": " + std::to_string(res.violations) + " violations");
  }
}

void ac8(Check& check) {
  const auto ce = counterexample<Q>(3, 7);
  const auto cfg = config(3, 2, RecoveryStrategy::simultaneous);
  const auto before = find_certified_hyperplanes(ce.instance.data(), cfg);
  const auto fs = hyperplanes_of(ce.first.D, kExact);
  for (const auto& f : fs) check(!hyperplane_found(before, f), "hyperplane found with 3 points");

  Rng rng(99);
  for (std::size_t j = 0; j < 3; ++j) {
    Matrix<Q> b(3, 1);
    for (std::size_t q = 0; q < 3; ++q)
      if (q != j) b(q, 0) = rng.nonzero_rational();
    const Matrix<Q> extra = ce.first.D * b;
    Matrix<Q> m(3, ce.instance.n() + 1);
    for (std::size_t i = 0; i < ce.instance.n(); ++i)
      for (std::size_t q = 0; q < 3; ++q) m(q, i) = ce.instance.data()(q, i);
    for (std::size_t q = 0; q < 3; ++q) m(q, ce.instance.n()) = extra(q, 0);
    const auto after = find_certified_hyperplanes(m, cfg);
    check(hyperplane_found(after, fs[j]), "augmented hyperplane not found, j = " + std::to_string(j));
  }
}

}  // namespace

int main() {
  const fs::path dir = fs::temp_directory_path() / ("lrsca_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  struct Criterion {
    std::string name;
    std::function<void(Check&)> fn;
    double limit_secs;
  };
  const std::vector<Criterion> criteria{
      {"AC1 counterexample r=3", [&](Check& c) { ac1(c, dir); }, 10},
      {"AC2 counterexample r=4", ac2, 60},
      {"AC3 staircase uniqueness", [&](Check& c) { ac3(c, dir); }, 10},
      {"AC4 planted r=4 pipeline", ac4, 300},
      {"AC5 bound arithmetic", ac5, 10},
      {"AC6 k=1 tightness", ac6, 10},
      {"AC7 property suites", ac7, 900},
      {"AC8 boundary point", ac8, 10},
  };
  int failures = 0;
  for (const auto& [name, fn, limit] : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      fn(check);
    } catch (const std::exception& e) {
      check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    check(secs <= limit, "exceeded the time limit");
    std::printf("%s %s (%.1fs)%s%s\n", check.ok ? "PASS" : "FAIL", name.c_str(), secs, check.ok ? "" : ": ",
                check.detail.c_str());
    std::fflush(stdout);
    failures += !check.ok;
  }
  fs::remove_all(dir);
  return failures == 0 ? 0 : 1;
}
