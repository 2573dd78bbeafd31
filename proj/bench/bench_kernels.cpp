#include <benchmark/benchmark.h>

#include "splitsq/certify.hpp"
#include "splitsq/experiments.hpp"
#include "splitsq/oracle.hpp"

using namespace splitsq;

namespace {

SweepSpec sweep_spec(int points) {
  SweepSpec spec;
  spec.n_total = 500;
  spec.modes = 4;
  spec.mu_grid = parse_grid("0.001:0.3:" + std::to_string(points));
  return spec;
}

void BM_sweep(benchmark::State& state, bool parallel) {
  const auto spec = sweep_spec(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(spec, parallel));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_figure(benchmark::State& state, bool parallel) {
  FigureOverrides o;
  o.parallel = parallel;
  for (auto _ : state) benchmark::DoNotOptimize(figure_data("fig2b", o));
}

void BM_certify(benchmark::State& state, bool parallel) {
  CertifyOptions opt;
  opt.parallel = parallel;
  for (auto _ : state) benchmark::DoNotOptimize(oracle_certify(static_cast<int>(state.range(0)), 1, opt));
}

std::vector<oracle::OpExpr> second_moments(int modes) {
  using oracle::OpExpr;
  std::vector<OpExpr> out;
  for (int k = 0; k < modes; ++k)
    for (int l = 0; l < modes; ++l)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          const OpExpr u = a == 0 ? OpExpr::jx(k) : a == 1 ? OpExpr::jy(k) : OpExpr::jz(k);
          const OpExpr v = b == 0 ? OpExpr::jx(l) : b == 1 ? OpExpr::jy(l) : OpExpr::jz(l);
          out.push_back(oracle::anticommutator_half(u, v));
        }
  return out;
}

void BM_expect(benchmark::State& state, bool parallel) {
  const int n = static_cast<int>(state.range(0));
  const auto st = oracle::split_state(oracle::oat_state(n, 0.3), {0.2, 0.3, 0.5});
  const auto exprs = second_moments(3);
  for (auto _ : state)
    benchmark::DoNotOptimize(parallel ? oracle::expect_many(st, exprs) : oracle::expect_many_serial(st, exprs));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(exprs.size()));
}

}  // namespace

BENCHMARK_CAPTURE(BM_sweep, serial, false)->Arg(256)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_sweep, parallel, true)->Arg(256)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_figure, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_figure, parallel, true)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_certify, serial, false)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_certify, parallel, true)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_expect, serial, false)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_expect, parallel, true)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
