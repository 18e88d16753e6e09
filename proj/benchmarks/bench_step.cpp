// Per-step cost of the finite-volume update across resolutions and laws,
// plus the flux assembly and CFL bound on their own. Items/second reports
// cells/second so resolutions are comparable at a glance.

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "crossdiff/grid.hpp"
#include "crossdiff/initdata.hpp"
#include "crossdiff/potentials.hpp"
#include "crossdiff/pressure.hpp"
#include "crossdiff/solver.hpp"

using namespace crossdiff;

namespace {

struct Fixture {
  Grid1D grid;
  State state;
  Potentials pots;
  double eta = 0.1;

  explicit Fixture(int n) : grid(n, 1.0) {
    const InitialData init =
        mollify_initial(grid, make_preset(grid, "mixed_gaussians"), eta);
    state = State{0.0, init.rho1, init.rho2};
    std::vector<double> v1(n), v2(n);
    for (int j = 0; j < n; ++j) {
      const double x = grid.center(j);
      v1[j] = 0.3 * x * x;
      v2[j] = -0.2 * x;
    }
    pots = mollify_potentials(grid, potentials_from_cells(grid, v1, v2), eta);
  }
};

void BM_step_logarithmic(benchmark::State& bench) {
  const int n = static_cast<int>(bench.range(0));
  Fixture fx(n);
  const PressureLaw law = PressureLaw::logarithmic(1.0);
  const double dt = cfl_dt(fx.grid, fx.state, fx.pots, law, fx.eta, 0.4);
  for (auto _ : bench) {
    StepResult result = step(fx.grid, fx.state, fx.pots, law, fx.eta, dt);
    benchmark::DoNotOptimize(result.state.rho1.data());
  }
  bench.SetItemsProcessed(bench.iterations() * n);
}
BENCHMARK(BM_step_logarithmic)->Arg(128)->Arg(256)->Arg(512);

void BM_step_power(benchmark::State& bench) {
  const int n = static_cast<int>(bench.range(0));
  Fixture fx(n);
  const PressureLaw law = PressureLaw::power(0.5, 1.0);
  const double dt = cfl_dt(fx.grid, fx.state, fx.pots, law, fx.eta, 0.4);
  for (auto _ : bench) {
    StepResult result = step(fx.grid, fx.state, fx.pots, law, fx.eta, dt);
    benchmark::DoNotOptimize(result.state.rho1.data());
  }
  bench.SetItemsProcessed(bench.iterations() * n);
}
BENCHMARK(BM_step_power)->Arg(128)->Arg(256)->Arg(512);

void BM_face_flux(benchmark::State& bench) {
  const int n = static_cast<int>(bench.range(0));
  Fixture fx(n);
  const PressureLaw law = PressureLaw::logarithmic(1.0);
  for (auto _ : bench) {
    FaceFlux flux = face_flux(fx.grid, fx.state, fx.pots, law, fx.eta);
    benchmark::DoNotOptimize(flux.species1.data());
  }
  bench.SetItemsProcessed(bench.iterations() * n);
}
BENCHMARK(BM_face_flux)->Arg(128)->Arg(512);

void BM_cfl_dt(benchmark::State& bench) {
  const int n = static_cast<int>(bench.range(0));
  Fixture fx(n);
  const PressureLaw law = PressureLaw::logarithmic(1.0);
  for (auto _ : bench)
    benchmark::DoNotOptimize(cfl_dt(fx.grid, fx.state, fx.pots, law, fx.eta, 0.4));
  bench.SetItemsProcessed(bench.iterations() * n);
}
BENCHMARK(BM_cfl_dt)->Arg(128)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
