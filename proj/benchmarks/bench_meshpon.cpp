#include <benchmark/benchmark.h>

#include "meshpon/despon.hpp"
#include "meshpon/latmodel.hpp"
#include "meshpon/maio.hpp"
#include "meshpon/powerbudget.hpp"

using namespace meshpon;

namespace {

MaioProblem reference(std::uint64_t seed, double load) {
  MaioProblem p;
  p.layout = generate_layout(seed, 7, 60, 5, 5);
  p.traffic = TrafficProfile::uniform(p.layout, load);
  return p;
}

void BM_BudgetTable(benchmark::State& state) {
  const auto configs = default_splitter_configs();
  const BudgetParams params;
  for (auto _ : state) benchmark::DoNotOptimize(budget_table(configs, params));
}
BENCHMARK(BM_BudgetTable);

// members split evenly between 7.1 and 7.2 at 50% load, one wavelength
void BM_AnalyticLatency(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto slice = composed_slice(n / 2, n - n / 2, 0.5);
  const auto params = AnalyticalParams::from(SimConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(analytic_latency(slice, params));
}
BENCHMARK(BM_AnalyticLatency)->Arg(2)->Arg(8)->Arg(12);

void BM_SimulateSlice(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto slice = composed_slice(n / 2, n - n / 2, 0.5);
  SimConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_slice(slice, config));
    ++config.seed;
  }
  state.SetItemsProcessed(state.iterations() * config.measured_frames);
}
BENCHMARK(BM_SimulateSlice)->Arg(2)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_LatencyFreeIlp(benchmark::State& state) {
  const auto model = build_ilp(reference(static_cast<std::uint64_t>(state.range(0)), 0.5));
  for (auto _ : state) benchmark::DoNotOptimize(solve_ilp(model));
}
BENCHMARK(BM_LatencyFreeIlp)->DenseRange(1, 3)->Unit(benchmark::kMicrosecond);

// range(0): max_iterations; load 0.5, seed 6
void BM_MaioAnalytical(benchmark::State& state) {
  auto p = reference(6, 0.5);
  p.max_iterations = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(maio_optimize(p));
}
BENCHMARK(BM_MaioAnalytical)->Arg(1)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_MaioSimulated(benchmark::State& state) {
  auto p = reference(1, 0.3);
  p.oracle = OracleKind::Simulated;
  for (auto _ : state) benchmark::DoNotOptimize(maio_optimize(p));
}
BENCHMARK(BM_MaioSimulated)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
