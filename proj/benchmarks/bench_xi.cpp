// Cost of xi_eta evaluation: the logarithmic law collapses to a constant, the
// power law pays for table-backed quadrature, and the direct oracle shows what
// the exponent cache saves. Construction is benchmarked separately because the
// table is precomputed there.

#include <benchmark/benchmark.h>

#include "crossdiff/pressure.hpp"
#include "crossdiff/xi.hpp"

using namespace crossdiff;

namespace {

double sample_s(int64_t i) { return 0.01 * (1.0 + (i % 997)); }

void BM_xi_eta_logarithmic(benchmark::State& state) {
  const XiEvaluator xi(PressureLaw::logarithmic(1.0), 0.1);
  int64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(xi.xi_eta(sample_s(i++)));
}
BENCHMARK(BM_xi_eta_logarithmic);

void BM_xi_eta_power_table(benchmark::State& state) {
  const XiEvaluator xi(PressureLaw::power(0.5, 1.0), 0.1);
  int64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(xi.xi_eta(sample_s(i++)));
}
BENCHMARK(BM_xi_eta_power_table);

void BM_xi_eta_power_direct(benchmark::State& state) {
  const XiEvaluator xi(PressureLaw::power(0.5, 1.0), 0.1);
  int64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(xi.xi_eta_direct(sample_s(i++)));
}
BENCHMARK(BM_xi_eta_power_direct);

void BM_xi_evaluator_construction_power(benchmark::State& state) {
  for (auto _ : state) {
    const XiEvaluator xi(PressureLaw::power(0.5, 1.0), 0.1);
    benchmark::DoNotOptimize(&xi);
  }
}
BENCHMARK(BM_xi_evaluator_construction_power);

void BM_xi_ode_residual_power(benchmark::State& state) {
  const XiEvaluator xi(PressureLaw::power(0.5, 1.0), 0.1);
  int64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(xi.ode_residual(sample_s(i++)));
}
BENCHMARK(BM_xi_ode_residual_power);

}  // namespace

BENCHMARK_MAIN();
