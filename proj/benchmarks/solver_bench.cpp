#include <benchmark/benchmark.h>

#include "bathtub/experiments.hpp"
#include "bathtub/forward.hpp"
#include "bathtub/inverse_distribution.hpp"
#include "bathtub/inverse_inflow.hpp"

using namespace bathtub;

namespace {

Scenario reference_scenario() {
  return example_config("5.1a").scenario;
}

void BM_UpwindMarch(benchmark::State& state) {
  Scenario s = reference_scenario();
  SpaceTimeGrid grid = SpaceTimeGrid::square(1.0 / static_cast<double>(state.range(0)), s);
  for (auto _ : state) {
    ForwardRun run = solve_upwind_trace(s, grid);
    benchmark::DoNotOptimize(run.trace.values.back());
  }
  state.SetItemsProcessed(state.iterations() * grid.num_steps() * grid.num_cells());
}
BENCHMARK(BM_UpwindMarch)->Arg(100)->Arg(200)->Arg(400);

void BM_Characteristics(benchmark::State& state) {
  Scenario s = reference_scenario();
  double dt = s.horizon / static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto [mass, trace] = solve_characteristics(s, dt);
    benchmark::DoNotOptimize(trace.values.back());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0) / 2);
}
BENCHMARK(BM_Characteristics)->Arg(500)->Arg(1000)->Arg(2000);

void BM_ExplicitReconstruction(benchmark::State& state) {
  Scenario s = reference_scenario();
  double dt = s.horizon / static_cast<double>(state.range(0));
  auto [mass, trace] = solve_characteristics(s, dt);
  for (auto _ : state) {
    Reconstruction rec = reconstruct_explicit(trace, s);
    benchmark::DoNotOptimize(rec.inflow.back());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0) / 2);
}
BENCHMARK(BM_ExplicitReconstruction)->Arg(500)->Arg(1000)->Arg(2000);

void BM_TriangularRecovery(benchmark::State& state) {
  Scenario s = reference_scenario();
  double dt = s.horizon / static_cast<double>(state.range(0));
  auto [mass_fwd, trace] = solve_characteristics(s, dt);
  MassCurve mass = integrate_delta_xi(trace, s);
  RecoveryNodes nodes = interpolate_nodes(mass, s, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    DistributionRecovery rec = solve_triangular(trace, nodes, s);
    benchmark::DoNotOptimize(rec.values.back());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0) / 2);
}
BENCHMARK(BM_TriangularRecovery)->Arg(500)->Arg(1000)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
