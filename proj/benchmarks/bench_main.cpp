#include <benchmark/benchmark.h>

#include "lrsca/certify.hpp"
#include "lrsca/generate.hpp"
#include "lrsca/oracle.hpp"
#include "lrsca/recover.hpp"

namespace {

using lrsca::Rational;

void BM_SparkExact(benchmark::State& state) {
  const auto r = static_cast<std::size_t>(state.range(0));
  const auto p = lrsca::planted_instance<Rational>(lrsca::GenSpec{r, r - 1, std::vector<std::size_t>(r, r + 1), 3, 0});
  const auto& m = p.instance.data();
  for (auto _ : state) benchmark::DoNotOptimize(lrsca::spark(m, lrsca::Tolerance::exact()));
}
BENCHMARK(BM_SparkExact)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_SparkFloat(benchmark::State& state) {
  const auto r = static_cast<std::size_t>(state.range(0));
  const auto p = lrsca::planted_instance<double>(lrsca::GenSpec{r, r - 1, std::vector<std::size_t>(r, r + 1), 3, 0});
  const auto& m = p.instance.data();
  for (auto _ : state) benchmark::DoNotOptimize(lrsca::spark(m, lrsca::Tolerance::relative()));
}
BENCHMARK(BM_SparkFloat)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_FindHyperplanes(benchmark::State& state) {
  const auto r = static_cast<std::size_t>(state.range(0));
  const auto per = lrsca::lemma2_bound(r, r - 1);
  const auto p = lrsca::planted_instance<Rational>(lrsca::GenSpec{r, r - 1, std::vector<std::size_t>(r, per), 5, 0});
  lrsca::RecoveryConfig cfg;
  cfg.r = r;
  cfg.k = r - 1;
  for (auto _ : state) benchmark::DoNotOptimize(lrsca::find_certified_hyperplanes(p.instance.data(), cfg));
}
BENCHMARK(BM_FindHyperplanes)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_OracleCounterexample(benchmark::State& state) {
  const auto ce = lrsca::counterexample<Rational>(3, 7);
  for (auto _ : state) benchmark::DoNotOptimize(lrsca::enumerate_decompositions(ce.instance));
}
BENCHMARK(BM_OracleCounterexample)->Unit(benchmark::kMillisecond);

void BM_OracleStaircase(benchmark::State& state) {
  const auto st = lrsca::staircase_instance<Rational>(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(lrsca::enumerate_decompositions(st.instance));
}
BENCHMARK(BM_OracleStaircase)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
