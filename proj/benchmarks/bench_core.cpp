#include <benchmark/benchmark.h>

#include <cmath>

#include "fmwave/audit.hpp"
#include "fmwave/energy.hpp"
#include "fmwave/minimize.hpp"
#include "fmwave/pde.hpp"

using namespace fmwave;

namespace {

Profile front_profile(const Grid& g) {
  Profile p(g, 1);
  for (int i = 0; i < g.n; ++i) p.node(i)[0] = 1.0 / (1.0 + std::exp(g.node(i) / std::sqrt(2.0)));
  p.pin_left[0] = p.node(0)[0];
  p.pin_right[0] = p.node(g.n - 1)[0];
  return p;
}

void BM_Energy(benchmark::State& state) {
  PotentialModel pot = make_tilted_cubic(0.25);
  Grid g(-40, 40, static_cast<int>(state.range(0)));
  Profile p = front_profile(g);
  for (auto _ : state) benchmark::DoNotOptimize(energy(p, pot, 0.3536).total);
  state.SetItemsProcessed(state.iterations() * g.n);
}
BENCHMARK(BM_Energy)->Arg(1001)->Arg(4001)->Arg(16001);

void BM_EnergyGradient(benchmark::State& state) {
  PotentialModel pot = make_tilted_cubic(0.25);
  Grid g(-40, 40, static_cast<int>(state.range(0)));
  Profile p = front_profile(g);
  for (auto _ : state) benchmark::DoNotOptimize(energy_gradient(p, pot, 0.3536));
  state.SetItemsProcessed(state.iterations() * g.n);
}
BENCHMARK(BM_EnergyGradient)->Arg(1001)->Arg(4001);

void BM_MinimizeAtSpeed(benchmark::State& state) {
  PotentialModel pot = make_tilted_cubic(0.25);
  AuditReport rep = audit(pot, 10000, 1);
  Grid g(-40, 40, static_cast<int>(state.range(0)));
  MinimizeConfig mc;
  for (auto _ : state)
    benchmark::DoNotOptimize(minimize(pot, rep.constants, g, 0.32, mc).energy);
}
BENCHMARK(BM_MinimizeAtSpeed)->Unit(benchmark::kMillisecond)->Arg(1001)->Arg(4001);

void BM_PdeStepBlock(benchmark::State& state) {
  PotentialModel pot = make_tilted_cubic(0.25);
  PdeConfig cfg;
  cfg.dx = 0.05;
  cfg.dt = 0.05;
  cfg.half_length = 50.0;
  cfg.t_end = 5.0;
  for (auto _ : state) benchmark::DoNotOptimize(pde_front_speed(pot, cfg).front.size());
  state.SetItemsProcessed(state.iterations() * static_cast<int>(cfg.t_end / cfg.dt) *
                          static_cast<int>(2 * cfg.half_length / cfg.dx));
}
BENCHMARK(BM_PdeStepBlock)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
