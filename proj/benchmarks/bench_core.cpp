#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "lambdap/decompose.hpp"
#include "lambdap/entropy.hpp"
#include "lambdap/inequalities.hpp"
#include "lambdap/lambda.hpp"
#include "lambdap/orthosys.hpp"
#include "lambdap/rng.hpp"
#include "lambdap/selectors.hpp"

using namespace lambdap;

namespace {

std::vector<double> unit_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  std::vector<double> a(n);
  double s = 0.0;
  for (double& x : a) s += (x = nd(gen)) * x;
  for (double& x : a) x /= std::sqrt(s);
  return a;
}

void BM_Philox(benchmark::State& st) {
  const CounterRng rng(42);
  std::uint64_t c = 0;
  for (auto _ : st) benchmark::DoNotOptimize(rng.block(c++));
}
BENCHMARK(BM_Philox);

void BM_SelectorCount(benchmark::State& st) {
  const auto l = static_cast<std::size_t>(st.range(0));
  std::uint64_t t = 0;
  for (auto _ : st) benchmark::DoNotOptimize(selector_count(7, l, t++, 0.1));
  st.SetItemsProcessed(st.iterations() * static_cast<long long>(l));
}
BENCHMARK(BM_SelectorCount)->Arg(40)->Arg(1000);

void BM_SynthesizeNorm(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto sys = build_system(SystemKind::trig, n);
  const auto a = unit_vector(n, 1);
  for (auto _ : st) benchmark::DoNotOptimize(lp_norm(synthesize(sys, a), 4.0));
}
BENCHMARK(BM_SynthesizeNorm)->Arg(64)->Arg(256);

void BM_Analyze(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto sys = build_system(SystemKind::walsh, n);
  const auto f = synthesize(sys, unit_vector(n, 2)).values;
  for (auto _ : st) benchmark::DoNotOptimize(analyze(sys, f));
}
BENCHMARK(BM_Analyze)->Arg(64)->Arg(256);

void BM_EstimateKs(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto sys = build_system(SystemKind::trig, n);
  const auto S = sample_selectors(n, selector_delta(n, 4.0), 3).active();
  for (auto _ : st) benchmark::DoNotOptimize(estimate_ks(sys, S, 4.0, {.restarts = 4, .seed = 1}).value);
}
BENCHMARK(BM_EstimateKs)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_ExactEntropy(benchmark::State& st) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  std::vector<Point> pts(static_cast<std::size_t>(st.range(0)), Point(3));
  for (auto& p : pts)
    for (double& x : p) x = ud(gen);
  const NormedCloud cloud{pts, Norm::euclidean(3)};
  for (auto _ : st) benchmark::DoNotOptimize(exact_entropy(cloud, 0.5).D_exact);
}
BENCHMARK(BM_ExactEntropy)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_DyadicUnit(benchmark::State& st) {
  const auto a = unit_vector(static_cast<std::size_t>(st.range(0)), 5);
  for (auto _ : st) benchmark::DoNotOptimize(dyadic_decompose_unit(a).levels.size());
}
BENCHMARK(BM_DyadicUnit)->Arg(1024);

void BM_ReductionDraw(benchmark::State& st) {
  const auto sys = build_system(SystemKind::walsh, 64);
  CoeffVector f(64);
  for (std::size_t i = 0; i < 32; ++i) f.set(i, 1.0 / std::sqrt(32.0));
  std::uint64_t d = 0;
  for (auto _ : st) benchmark::DoNotOptimize(reduction_draw(sys, f, 4.0, 4.0, 9, d++).accepted);
}
BENCHMARK(BM_ReductionDraw);

void BM_CheckNumerical(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(check_numerical(2.5, 10.0, 0.05).violations);
}
BENCHMARK(BM_CheckNumerical)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
