// Serial reference vs OpenMP kernel for the phi-grid sampling of the return
// map and for the biped sweep.

#include <benchmark/benchmark.h>

#include <vector>

#include "twocontact/app.hpp"
#include "twocontact/poincare.hpp"
#include "twocontact/simulator.hpp"

using namespace twocontact;

namespace {

Configuration config_A() {
  Configuration c;
  c.m = 0.594;
  c.rho = 0.143;
  c.h = 0.1341;
  c.l1 = -0.0512;
  c.l2 = 0.1688;
  c.mu1 = 0.315;
  c.mu2 = 1.0;
  c.alpha = 25.0 * 3.14159265358979323846 / 180.0;
  return c;
}

void BM_PhiGrid(benchmark::State& state, bool parallel) {
  const Simulator sim(config_A());
  const RGFunction f = rg_function(sim);
  const std::vector<double> phis = uniform_grid(static_cast<int>(state.range(0)), 1e-3);
  for (auto _ : state) {
    auto out = parallel ? sample_parallel(f, phis) : sample_serial(f, phis);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(phis.size()));
}

void BM_Sweep(benchmark::State& state, bool parallel) {
  const BipedFile biped;
  for (auto _ : state) {
    auto cells = sweep_grid(biped, {0.315}, RGOptions{}, parallel);
    benchmark::DoNotOptimize(cells.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_PhiGrid, serial, false)->Arg(256)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_PhiGrid, parallel, true)->Arg(256)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Sweep, serial, false)->Unit(benchmark::kSecond)->Iterations(1);
BENCHMARK_CAPTURE(BM_Sweep, parallel, true)->Unit(benchmark::kSecond)->Iterations(1);

BENCHMARK_MAIN();
