// Serial reference against the OpenMP path for the two hot loops: a batch of
// independent trajectories and the blocked efficiency experiment.

#include <numbers>

#include <benchmark/benchmark.h>

#include "micromaser/experiments.hpp"
#include "micromaser/parallel.hpp"

namespace {

using namespace micromaser;

SimParams fig5_params() {
  SimParams p;
  p.R = 500;
  p.gamma = 20;
  p.delta_phi = 0.005 * std::numbers::pi;
  p.eta_g = 0.8;
  p.r_b = 2;
  return p;
}

void BM_Batch(benchmark::State& state, Execution execution) {
  const auto p = fig5_params();
  TrajectoryOptions options;
  options.controller = ControllerConfig::defaults_for(p);
  options.controller->threshold = 10;
  const auto schedule = InjectionSchedule::uniform_spacing(2, 4);
  for (auto _ : state) {
    auto runs = run_batch(p, schedule, 100.0, 1, static_cast<std::size_t>(state.range(0)), options, execution);
    benchmark::DoNotOptimize(runs);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = execution == Execution::parallel ? worker_threads() : 1;
}

void BM_Efficiency(benchmark::State& state, Execution execution) {
  const auto p = fig5_params();
  auto config = ControllerConfig::defaults_for(p);
  config.threshold = 10;
  EfficiencyOptions options;
  options.execution = execution;
  for (auto _ : state) {
    auto point = efficiency_experiment(p, config, state.range(0), 42, options);
    benchmark::DoNotOptimize(point);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_OccupationChains(benchmark::State& state, Execution execution) {
  SimParams p;
  p.R = 80;
  p.delta_phi = 0.2;
  p.n_t = 0.1;
  p.n_max = 30;
  for (auto _ : state) {
    auto occupation = sampled_occupation_chains(p, static_cast<std::uint64_t>(state.range(0)), 8, 3, execution);
    benchmark::DoNotOptimize(occupation);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK_CAPTURE(BM_Batch, serial, Execution::serial)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Batch, parallel, Execution::parallel)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Efficiency, serial, Execution::serial)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Efficiency, parallel, Execution::parallel)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_OccupationChains, serial, Execution::serial)->Arg(1'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_OccupationChains, parallel, Execution::parallel)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
