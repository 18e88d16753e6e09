// Cost of the per-snapshot diagnostics: the full record assembly (what a run
// pays per output time), the dissipation functional (what track_dissipation
// pays per step), and the cheaper single ledgers for comparison.

#include <benchmark/benchmark.h>

#include <vector>

#include "crossdiff/diagnostics.hpp"
#include "crossdiff/grid.hpp"
#include "crossdiff/initdata.hpp"
#include "crossdiff/potentials.hpp"
#include "crossdiff/pressure.hpp"
#include "crossdiff/solver.hpp"
#include "crossdiff/xi.hpp"

using namespace crossdiff;

namespace {

struct Fixture {
  Grid1D grid;
  State state;
  Potentials pots;
  std::vector<double> sigma;
  double eta = 0.1;

  explicit Fixture(int n) : grid(n, 1.0) {
    const InitialData init =
        mollify_initial(grid, make_preset(grid, "partial_overlap"), eta);
    state = State{0.0, init.rho1, init.rho2};
    std::vector<double> v1(n), v2(n);
    for (int j = 0; j < n; ++j) {
      const double x = grid.center(j);
      v1[j] = 0.3 * x;
      v2[j] = -0.2 * x * x;
    }
    pots = mollify_potentials(grid, potentials_from_cells(grid, v1, v2), eta);
    sigma.resize(n);
    for (int j = 0; j < n; ++j) sigma[j] = init.rho1[j] + init.rho2[j];
  }
};

void BM_compute_record(benchmark::State& bench) {
  const int n = static_cast<int>(bench.range(0));
  Fixture fx(n);
  const XiEvaluator xi(PressureLaw::logarithmic(1.0), fx.eta);
  const DiagnosticsConfig cfg;
  for (auto _ : bench) {
    DiagnosticsRecord rec = compute_record(fx.grid, fx.state, fx.pots, xi, cfg, 0, 0);
    benchmark::DoNotOptimize(rec.energy);
  }
  bench.SetItemsProcessed(bench.iterations() * n);
}
BENCHMARK(BM_compute_record)->Arg(128)->Arg(512);

void BM_dissipation(benchmark::State& bench) {
  const int n = static_cast<int>(bench.range(0));
  Fixture fx(n);
  const PressureLaw law = PressureLaw::logarithmic(1.0);
  for (auto _ : bench)
    benchmark::DoNotOptimize(dissipation_D(fx.grid, fx.state, fx.pots, law, fx.eta));
  bench.SetItemsProcessed(bench.iterations() * n);
}
BENCHMARK(BM_dissipation)->Arg(128)->Arg(512);

void BM_energy(benchmark::State& bench) {
  const int n = static_cast<int>(bench.range(0));
  Fixture fx(n);
  const PressureLaw law = PressureLaw::logarithmic(1.0);
  for (auto _ : bench)
    benchmark::DoNotOptimize(energy_F(fx.grid, fx.state, fx.pots, law, fx.eta));
  bench.SetItemsProcessed(bench.iterations() * n);
}
BENCHMARK(BM_energy)->Arg(128)->Arg(512);

void BM_lp_ledger(benchmark::State& bench) {
  const int n = static_cast<int>(bench.range(0));
  Fixture fx(n);
  const PressureLaw law = PressureLaw::logarithmic(1.0);
  const std::vector<double> p_list{2.0, 3.0};
  for (auto _ : bench) {
    LpLedger ledger = lp_ledger(fx.grid, fx.sigma, law, p_list, 1.0);
    benchmark::DoNotOptimize(ledger.reciprocal_norm);
  }
  bench.SetItemsProcessed(bench.iterations() * n);
}
BENCHMARK(BM_lp_ledger)->Arg(128)->Arg(512);

void BM_b_ledger(benchmark::State& bench) {
  const int n = static_cast<int>(bench.range(0));
  Fixture fx(n);
  const PressureLaw law = PressureLaw::power(0.5, 1.0);
  for (auto _ : bench) {
    BLedger ledger = b_ledger(fx.grid, fx.sigma, law, fx.eta);
    benchmark::DoNotOptimize(ledger.b_hat);
  }
  bench.SetItemsProcessed(bench.iterations() * n);
}
BENCHMARK(BM_b_ledger)->Arg(128)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
