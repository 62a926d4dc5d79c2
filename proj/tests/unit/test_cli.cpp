#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "lrsca/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run lrsca_run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = lrsca::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("lrsca_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("gen writes instance files") {
  TempDir tmp;
  const auto ce = tmp.file("ce.json");
  CHECK(lrsca_run({"gen", "--mode", "counterexample", "--r", "3", "--seed", "7", "--out", ce}).code == 0);
  const auto f = lrsca::parse_instance_file<lrsca::Rational>(slurp(ce));
  CHECK(f.M.cols() == 9);
  CHECK(f.alternatives.size() == 1);

  const auto again = lrsca_run({"gen", "--mode", "counterexample", "--r", "3", "--seed", "7"});
  CHECK(again.out == slurp(ce));

  const auto st = lrsca_run({"gen", "--mode", "staircase", "--r", "3", "--seed", "1"});
  CHECK(st.code == 0);
  CHECK(lrsca::parse_instance_file<lrsca::Rational>(st.out).generator_counts == std::vector<std::size_t>{4, 3, 2});

  const auto autoc = lrsca_run({"gen", "--r", "3", "--k", "2", "--seed", "3"});
  CHECK(lrsca::parse_instance_file<lrsca::Rational>(autoc.out).M.cols() == 12);

  CHECK(lrsca_run({"gen", "--r", "3", "--k", "5"}).code == 2);
  CHECK(lrsca_run({"gen", "--r", "3", "--counts", "1,2"}).code == 2);
  CHECK(lrsca_run({"gen", "--r", "3", "--mode", "bogus"}).code == 2);
  CHECK(lrsca_run({"gen", "--mode", "counterexample", "--r", "2"}).code == 2);
  CHECK(lrsca_run({}).code == 2);
  CHECK(lrsca_run({"--help"}).code == 0);
}

TEST_CASE("certify, recover, verify and oracle exit codes") {
  TempDir tmp;
  const auto ce = tmp.file("ce.json");
  const auto st = tmp.file("st.json");
  const auto rec = tmp.file("rec.json");
  REQUIRE(lrsca_run({"gen", "--mode", "counterexample", "--r", "3", "--seed", "7", "--out", ce}).code == 0);
  REQUIRE(lrsca_run({"gen", "--mode", "staircase", "--r", "3", "--seed", "1", "--out", st}).code == 0);

  CHECK(lrsca_run({"certify", st, "--method", "thm1"}).code == 1);
  const auto seq = lrsca_run({"certify", st, "--method", "seq"});
  CHECK(seq.code == 0);
  CHECK(seq.out.find("\"ordering\"") != std::string::npos);
  CHECK(seq.out.find("\"numerator\"") != std::string::npos);
  CHECK(lrsca_run({"certify", ce, "--method", "all"}).code == 1);
  CHECK(lrsca_run({"certify", st, "--method", "cor2", "--ordering", "greedy"}).code == 0);

  CHECK(lrsca_run({"recover", st}).code == 1);
  CHECK(lrsca_run({"recover", st, "--strategy", "sequential", "--out", rec}).code == 0);
  const auto v = lrsca_run({"verify", st, rec});
  CHECK(v.code == 0);
  CHECK(v.out.find("permutation") != std::string::npos);
  const auto distinct = lrsca_run({"verify", ce});
  CHECK(distinct.code == 1);
  CHECK(distinct.out == "distinct\n");

  const auto o = lrsca_run({"oracle", ce});
  CHECK(o.code == 1);
  CHECK(o.out == "2\n");
  const auto ou = lrsca_run({"oracle", st, "--out", tmp.file("oracle.json")});
  CHECK(ou.code == 0);
  CHECK(slurp(tmp.file("oracle.json")).find("\"count\": 1") != std::string::npos);
  CHECK(lrsca_run({"oracle", ce, "--cap", "2"}).code == 4);

  CHECK(lrsca_run({"recover", st, "--cap", "1"}).code == 4);
  CHECK(lrsca_run({"certify", tmp.file("missing.json")}).code == 2);
}

TEST_CASE("float backend through the command line") {
  TempDir tmp;
  const auto st = tmp.file("stf.json");
  REQUIRE(lrsca_run({"gen", "--mode", "staircase", "--r", "3", "--seed", "1", "--backend", "float", "--out", st}).code ==
          0);
  CHECK(lrsca_run({"certify", st, "--method", "seq"}).code == 0);
  CHECK(lrsca_run({"recover", st, "--strategy", "sequential", "--tol", "1e-9"}).code == 0);
  CHECK(lrsca_run({"oracle", st}).code == 2);
  CHECK(lrsca_run({"recover", st, "--tol", "0.5"}).code == 2);
}

TEST_CASE("spark command") {
  TempDir tmp;
  const auto id = tmp.file("id.json");
  std::ofstream(id) << R"({"M": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]})";
  const auto s = lrsca_run({"spark", id});
  CHECK(s.code == 0);
  CHECK(s.out == "4\n");

  const auto wide = tmp.file("wide.json");
  std::ofstream w(wide);
  w << R"({"M": [[)";
  for (int i = 0; i < 30; ++i) w << (i ? "," : "") << i + 1;
  w << "]]}";
  w.close();
  CHECK(lrsca_run({"spark", wide}).code == 4);
  CHECK(lrsca_run({"spark", wide, "--max-columns", "40"}).out == "2\n");
}

TEST_CASE("plot command") {
  TempDir tmp;
  const auto ce = tmp.file("ce.json");
  const auto p4 = tmp.file("p4.json");
  REQUIRE(lrsca_run({"gen", "--mode", "counterexample", "--r", "3", "--seed", "7", "--out", ce}).code == 0);
  REQUIRE(lrsca_run({"gen", "--r", "4", "--k", "3", "--counts", "1,1,1,1", "--out", p4}).code == 0);
  const auto svg = lrsca_run({"plot", ce});
  CHECK(svg.code == 0);
  CHECK(svg.out.rfind("<svg", 0) == 0);
  std::size_t dots = 0;
  for (auto pos = svg.out.find("fill=\"black\""); pos != std::string::npos; pos = svg.out.find("fill=\"black\"", pos + 1))
    ++dots;
  CHECK(dots == 9);
  CHECK(svg.out.find("stroke-dasharray") != std::string::npos);
  CHECK(lrsca_run({"plot", ce}).out == svg.out);
  CHECK(lrsca_run({"plot", p4}).code == 2);
}
