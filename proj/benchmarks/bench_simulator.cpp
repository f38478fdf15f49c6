#include <benchmark/benchmark.h>

#include "rlvr/simulator.hpp"

namespace {

// Cost per optimizer step at desk scale, as a function of N.
void BM_DeskSimulation(benchmark::State& state) {
  auto config = rlvr::SimulationConfig::desk_preset();
  config.n_rollouts = static_cast<std::size_t>(state.range(0));
  config.steps = 50;
  for (auto _ : state) benchmark::DoNotOptimize(rlvr::run_simulation(config));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(config.steps));
}
BENCHMARK(BM_DeskSimulation)->Arg(4)->Arg(64)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace
