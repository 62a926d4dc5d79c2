#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "lrsca/certify.hpp"
#include "lrsca/generate.hpp"
#include "lrsca/io.hpp"
#include "lrsca/oracle.hpp"
#include "lrsca/plot.hpp"
#include "lrsca/recover.hpp"

namespace lrsca::cli {

namespace {

struct Common {
  std::uint64_t seed = 0;
  std::string backend;  // empty: take it from the input file
  double tol = kDefaultRelEps;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Random seed");
  app->add_option("--backend", c.backend, "Numeric backend")->check(CLI::IsMember({"exact", "float"}));
  app->add_option("--tol", c.tol, "Relative tolerance for the float backend");
}

int exit_for(const Error& e) {
  switch (e.code()) {
    case Errc::retry_exhausted: return kGenerationFailed;
    case Errc::cap_exceeded:
    case Errc::size_limit: return kCapExceeded;
    case Errc::not_identified:
    case Errc::invalid_decomposition: return kNegative;
    default: return kInvalidInput;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::parse_error, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes via a temporary file and a rename so readers never see a partial file.
void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(Errc::invalid_params, "cannot write " + path);
    f << text;
    if (!f) throw Error(Errc::invalid_params, "cannot write " + path);
  }
  std::filesystem::rename(tmp, path);
}

Backend parse_backend(const std::string& name) { return name == "float" ? Backend::floating : Backend::exact; }

template <Scalar T>
Tolerance tolerance_for(const Common& c) {
  if constexpr (backend_of<T> == Backend::exact) {
    return Tolerance::exact();
  } else {
    return Tolerance::relative(c.tol);
  }
}

template <Scalar To, Scalar From>
Matrix<To> convert(const Matrix<From>& m) {
  if constexpr (std::same_as<To, From>) {
    return m;
  } else if constexpr (std::same_as<To, double>) {
    return to_double(m);
  } else {
    return to_rational(m);
  }
}

template <Scalar To, Scalar From>
std::optional<Matrix<To>> convert(const std::optional<Matrix<From>>& m) {
  if (!m) return std::nullopt;
  return convert<To>(*m);
}

template <Scalar To, Scalar From>
std::vector<Decomposition<To>> convert(const std::vector<Decomposition<From>>& v) {
  std::vector<Decomposition<To>> out;
  for (const auto& d : v) out.push_back(Decomposition<To>{convert<To>(d.D), convert<To>(d.B)});
  return out;
}

template <Scalar To, Scalar From>
InstanceFile<To> convert_file(const InstanceFile<From>& f) {
  InstanceFile<To> g;
  g.r = f.r;
  g.k = f.k;
  g.M = convert<To>(f.M);
  g.D = convert<To>(f.D);
  g.B = convert<To>(f.B);
  g.alternatives = convert<To>(f.alternatives);
  g.seed = f.seed;
  g.generator_mode = f.generator_mode;
  g.generator_counts = f.generator_counts;
  return g;
}

template <Scalar To, Scalar From>
DecompositionFile<To> convert_file(const DecompositionFile<From>& f) {
  DecompositionFile<To> g;
  g.D = convert<To>(f.D);
  g.B = convert<To>(f.B);
  g.M = convert<To>(f.M);
  g.r = f.r;
  g.k = f.k;
  g.alternatives = convert<To>(f.alternatives);
  return g;
}

template <Scalar T>
InstanceFile<T> load_instance(const std::string& text, bool strict) {
  if (detect_backend(text) == Backend::exact) return convert_file<T>(parse_instance_file<Rational>(text, strict));
  return convert_file<T>(parse_instance_file<double>(text, strict));
}

template <Scalar T>
DecompositionFile<T> load_decomposition(const std::string& text) {
  if (detect_backend(text) == Backend::exact) return convert_file<T>(parse_decomposition_file<Rational>(text));
  return convert_file<T>(parse_decomposition_file<double>(text));
}

// Runs body<T> with T chosen by the flag, else by the file.
template <class Body>
int dispatch(const Common& c, const std::string& text, Body&& body) {
  const Backend b = c.backend.empty() ? detect_backend(text) : parse_backend(c.backend);
  if (b == Backend::exact) return body(Rational{});
  return body(double{});
}

template <Scalar T>
Matrix<T> planted_b(const InstanceFile<T>& f, const Tolerance& tol) {
  if (!f.D) throw Error(Errc::invalid_params, "the input file carries no dictionary D");
  if (f.B) return *f.B;
  return solve_coefficients(*f.D, f.M, tol);
}

// ---- gen -------------------------------------------------------------------

struct GenArgs {
  Common common;
  std::size_t r = 0;
  std::optional<std::size_t> k;
  std::string counts = "auto";
  std::string mode = "planted";
  std::size_t p = 0;
  std::string out;
};

std::vector<std::size_t> parse_counts(const std::string& text, std::size_t r, std::size_t k) {
  if (text == "auto") return std::vector<std::size_t>(r, lemma2_bound(r, k));
  std::vector<std::size_t> counts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v <= 0) throw std::invalid_argument(item);
      counts.push_back(static_cast<std::size_t>(v));
    } catch (const std::logic_error&) {
      throw Error(Errc::invalid_params, "--counts expects positive integers, got '" + item + "'");
    }
  }
  if (counts.size() != r) throw Error(Errc::invalid_params, "--counts must list r values");
  return counts;
}

template <Scalar T>
InstanceFile<T> generate_file(const GenArgs& a) {
  const Tolerance tol = tolerance_for<T>(a.common);
  InstanceFile<T> f;
  f.r = a.r;
  f.seed = a.common.seed;
  f.generator_mode = a.mode;
  if (a.mode == "counterexample") {
    if (a.k && *a.k != a.r - 1) throw Error(Errc::invalid_params, "counterexamples have k = r-1");
    if (a.p != 0 && a.p != a.r) throw Error(Errc::invalid_params, "counterexamples live in dimension r");
    auto ce = counterexample<T>(a.r, a.common.seed, tol);
    f.k = a.r - 1;
    f.M = ce.instance.data();
    f.D = ce.first.D;
    f.B = ce.first.B;
    f.alternatives.push_back(ce.second);
    f.generator_counts.assign(a.r, a.r * (a.r - 2));
    return f;
  }
  PlantedInstance<T> planted = [&] {
    if (a.mode == "staircase") {
      if (a.k && *a.k != a.r - 1) throw Error(Errc::invalid_params, "staircase instances have k = r-1");
      if (a.p != 0 && a.p != a.r) throw Error(Errc::invalid_params, "staircase instances live in dimension r");
      return staircase_instance<T>(a.r, a.common.seed, tol);
    }
    const std::size_t k = a.k.value_or(a.r - 1);
    if (k < 1 || k >= a.r) throw Error(Errc::invalid_params, "need 1 <= k < r");
    return planted_instance<T>(GenSpec{a.r, k, parse_counts(a.counts, a.r, k), a.common.seed, a.p}, tol);
  }();
  f.k = planted.instance.k();
  f.M = planted.instance.data();
  f.D = planted.truth.D;
  f.B = planted.truth.B;
  for (const auto& idx : planted.index_sets) f.generator_counts.push_back(idx.size());
  return f;
}

int cmd_gen(const GenArgs& a, std::ostream& out) {
  if (a.r < 2) throw Error(Errc::invalid_r, "need r >= 2");
  const bool exact = a.common.backend != "float";
  const std::string text =
      exact ? write_instance_file(generate_file<Rational>(a)) : write_instance_file(generate_file<double>(a));
  write_output(a.out, text, out);
  return kOk;
}

// ---- certify -----------------------------------------------------------------

struct CertifyArgs {
  Common common;
  std::string file;
  std::string method = "all";
  std::string ordering = "exhaustive";
  bool no_prune = false;
  std::string out;
};

template <Scalar T>
int certify_as(const CertifyArgs& a, const std::string& text, std::ostream& out) {
  const auto f = load_instance<T>(text, true);
  const Tolerance tol = tolerance_for<T>(a.common);
  if (!f.D) throw Error(Errc::invalid_params, "certify needs a candidate dictionary D in the input file");
  const Instance<T> inst = f.instance();
  const Decomposition<T> dec{*f.D, planted_b(f, tol)};
  const ValidationReport report = validate(inst, dec, tol);
  if (!report.passed()) throw Error(Errc::invalid_params, "candidate decomposition is invalid: " + report.summary());
  const MembershipMatrix z = membership(inst, dec.D, tol);

  CertifyOptions opts;
  opts.strategy = a.ordering == "greedy" ? OrderingStrategy::greedy : OrderingStrategy::exhaustive;
  opts.prune = !a.no_prune;

  std::vector<std::string> methods;
  if (a.method == "all") {
    methods = {"thm1", "seq", "cor2"};
  } else {
    methods = {a.method};
  }
  for (const auto& m : methods) {
    std::optional<Certificate<T>> cert;
    if (m == "thm1") cert = certify_theorem1(inst, z, tol, opts);
    if (m == "seq") cert = certify_sequential(inst, z, tol, opts);
    if (m == "cor2") cert = certify_corollary2(inst, z, tol, opts);
    if (cert) {
      write_output(a.out, certificate_json(*cert), out);
      return kOk;
    }
  }
  write_output(a.out, "{\n  \"certified\": false,\n  \"method\": \"" + a.method + "\"\n}\n", out);
  return kNegative;
}

// ---- recover -----------------------------------------------------------------

struct RecoverArgs {
  Common common;
  std::string file;
  std::string strategy = "simultaneous";
  std::size_t cap = 1'000'000;
  std::string out;
};

template <Scalar T>
int recover_as(const RecoverArgs& a, const std::string& text, std::ostream& out) {
  const auto f = load_instance<T>(text, true);
  RecoveryConfig cfg;
  cfg.r = f.r;
  cfg.k = f.k;
  cfg.tol = tolerance_for<T>(a.common);
  cfg.max_subsets = a.cap;
  cfg.strategy = a.strategy == "sequential" ? RecoveryStrategy::sequential : RecoveryStrategy::simultaneous;
  const Recovery<T> rec = recover(f.M, cfg);
  write_output(a.out, recovery_json(rec), out);
  return kOk;
}

// ---- oracle ------------------------------------------------------------------

struct OracleArgs {
  Common common;
  std::string file;
  std::size_t cap = OracleOptions{}.max_nodes;
  std::size_t max_listed = OracleOptions{}.max_listed;
  std::string out;
};

template <Scalar T>
int oracle_as(const OracleArgs& a, const std::string& text, std::ostream& out) {
  const auto f = load_instance<T>(text, true);
  OracleOptions opts;
  opts.max_nodes = a.cap;
  opts.max_listed = a.max_listed;
  opts.seed = a.common.seed;
  const OracleResult<T> res = enumerate_decompositions(f.instance(), opts);
  out << (res.count ? std::to_string(*res.count) : std::string("infinite")) << "\n";
  if (!a.out.empty()) write_output(a.out, oracle_json(res), out);
  return res.unique() ? kOk : kNegative;
}

// ---- spark -------------------------------------------------------------------

struct SparkArgs {
  Common common;
  std::string file;
  std::size_t max_columns = SparkOptions{}.max_columns;
};

template <Scalar T>
int spark_as(const SparkArgs& a, const std::string& text, std::ostream& out) {
  const auto f = load_instance<T>(text, false);
  out << spark(f.M, tolerance_for<T>(a.common), SparkOptions{a.max_columns}) << "\n";
  return kOk;
}

// ---- verify ------------------------------------------------------------------

struct VerifyArgs {
  Common common;
  std::vector<std::string> files;
};

template <Scalar T>
bool check_valid(const DecompositionFile<T>& f, const Tolerance& tol, const std::string& name, std::ostream& err) {
  if (!f.M || f.r == 0 || f.k == 0) return true;
  const Matrix<T> b = f.B ? *f.B : solve_coefficients(f.D, *f.M, tol);
  const ValidationReport rep = validate(Instance<T>(*f.M, f.r, f.k), Decomposition<T>{f.D, b}, tol);
  if (!rep.passed()) err << name << ": invalid decomposition: " << rep.summary() << "\n";
  return rep.passed();
}

template <Scalar T>
int verify_as(const VerifyArgs& a, const std::vector<std::string>& texts, std::ostream& out, std::ostream& err) {
  const Tolerance tol = tolerance_for<T>(a.common);
  const auto first = load_decomposition<T>(texts[0]);
  Matrix<T> other;
  bool valid = check_valid(first, tol, a.files[0], err);
  if (texts.size() == 2) {
    const auto second = load_decomposition<T>(texts[1]);
    valid = check_valid(second, tol, a.files[1], err) && valid;
    other = second.D;
  } else {
    if (first.alternatives.empty()) throw Error(Errc::invalid_params, "a single file needs an alternatives entry");
    other = first.alternatives.front().D;
  }
  if (!valid) {
    out << "invalid\n";
    return kNegative;
  }
  const auto w = essentially_equal(first.D, other, tol);
  if (!w) {
    out << "distinct\n";
    return kNegative;
  }
  out << witness_json(*w);
  return kOk;
}

// ---- plot --------------------------------------------------------------------

struct PlotArgs {
  Common common;
  std::string file;
  std::string out;
};

template <Scalar T>
int plot_as(const PlotArgs& a, const std::string& text, std::ostream& out) {
  const auto f = load_instance<T>(text, false);
  const Tolerance tol = tolerance_for<T>(a.common);
  if (f.r != 3) throw Error(Errc::invalid_r, "plots are drawn for r = 3 only");
  std::vector<Matrix<T>> dicts;
  if (f.D) dicts.push_back(*f.D);
  for (const auto& alt : f.alternatives) dicts.push_back(alt.D);

  Matrix<T> m = f.M;
  if (m.rows() != 3) {
    const RankReduction<T> red = reduce_to_rank_space(f.M, tol);
    if (red.reduced.rows() != 3) throw Error(Errc::invalid_r, "data do not have rank 3");
    m = red.reduced;
    for (auto& d : dicts) d = solve_coefficients(red.lift, d, tol);
  }
  std::vector<Matrix<double>> dd;
  for (const auto& d : dicts) dd.push_back(convert<double>(d));
  write_output(a.out, projective_svg(convert<double>(m), dd), out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Identifiability tools for low-rank sparse component analysis", "lrsca"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "lrsca 0.1.0");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate an instance file");
  add_common(g, gen.common);
  g->add_option("--r", gen.r, "Rank r")->required();
  g->add_option("--k", gen.k, "Sparsity k (default r-1)");
  g->add_option("--counts", gen.counts, "Points per hyperplane: comma list or auto");
  g->add_option("--mode", gen.mode)->check(CLI::IsMember({"planted", "counterexample", "staircase"}));
  g->add_option("--p", gen.p, "Ambient dimension (default r)");
  g->add_option("--out,-o", gen.out, "Output path (default stdout)");

  CertifyArgs cert;
  auto* c = app.add_subcommand("certify", "Certify essential uniqueness of the file's decomposition");
  add_common(c, cert.common);
  c->add_option("file", cert.file, "Instance file with a candidate D")->required();
  c->add_option("--method", cert.method, "Certifier to run")->check(CLI::IsMember({"thm1", "seq", "cor2", "all"}));
  c->add_option("--ordering", cert.ordering, "Ordering search for seq and cor2")->check(CLI::IsMember({"exhaustive", "greedy"}));
  c->add_flag("--no-prune", cert.no_prune, "Skip the c >= r-k pruning (seq only)");
  c->add_option("--out,-o", cert.out, "Write the certificate JSON here");

  RecoverArgs rec;
  auto* r = app.add_subcommand("recover", "Recover D and B from M");
  add_common(r, rec.common);
  r->add_option("file", rec.file, "Instance file")->required();
  r->add_option("--strategy", rec.strategy, "Search strategy")->check(CLI::IsMember({"simultaneous", "sequential"}));
  r->add_option("--cap", rec.cap, "Subset enumeration budget")->check(CLI::PositiveNumber);
  r->add_option("--out,-o", rec.out, "Write the recovery JSON here");

  OracleArgs orc;
  auto* o = app.add_subcommand("oracle", "Count essentially distinct decompositions");
  add_common(o, orc.common);
  o->add_option("file", orc.file, "Instance file (exact backend)")->required();
  o->add_option("--cap", orc.cap, "Search node budget")->check(CLI::PositiveNumber);
  o->add_option("--max-listed", orc.max_listed, "Decompositions kept in the JSON output");
  o->add_option("--out,-o", orc.out, "Write the full result as JSON");

  SparkArgs spk;
  auto* s = app.add_subcommand("spark", "Print the spark of M");
  add_common(s, spk.common);
  s->add_option("file", spk.file, "Instance file")->required();
  s->add_option("--max-columns", spk.max_columns, "Column cap for the subset enumeration");

  VerifyArgs ver;
  auto* v = app.add_subcommand("verify", "Test two dictionaries for essential equality");
  add_common(v, ver.common);
  v->add_option("files", ver.files, "One file with alternatives, or two files")->required()->expected(1, 2);

  PlotArgs plt;
  auto* p = app.add_subcommand("plot", "Draw an r = 3 instance as SVG");
  add_common(p, plt.common);
  p->add_option("file", plt.file, "Instance file with r = 3")->required();
  p->add_option("--out,-o", plt.out, "Output path (default stdout)");

  std::vector<const char*> argv{"lrsca"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    if (*g) return cmd_gen(gen, out);
    if (*c) {
      const std::string text = read_file(cert.file);
      return dispatch(cert.common, text, [&](auto t) { return certify_as<decltype(t)>(cert, text, out); });
    }
    if (*r) {
      const std::string text = read_file(rec.file);
      return dispatch(rec.common, text, [&](auto t) { return recover_as<decltype(t)>(rec, text, out); });
    }
    if (*o) {
      const std::string text = read_file(orc.file);
      return dispatch(orc.common, text, [&](auto t) { return oracle_as<decltype(t)>(orc, text, out); });
    }
    if (*s) {
      const std::string text = read_file(spk.file);
      return dispatch(spk.common, text, [&](auto t) { return spark_as<decltype(t)>(spk, text, out); });
    }
    if (*v) {
      std::vector<std::string> texts;
      for (const auto& f : ver.files) texts.push_back(read_file(f));
      Common common = ver.common;
      if (common.backend.empty()) {
        common.backend = "exact";
        for (const auto& t : texts)
          if (detect_backend(t) == Backend::floating) common.backend = "float";
      }
      return dispatch(common, texts[0], [&](auto t) { return verify_as<decltype(t)>(ver, texts, out, err); });
    }
    if (*p) {
      const std::string text = read_file(plt.file);
      return dispatch(plt.common, text, [&](auto t) { return plot_as<decltype(t)>(plt, text, out); });
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  return kInvalidInput;
}

}  // namespace lrsca::cli
