// Serial reference path vs OpenMP path for the harness, plus the raw cost of
// one learner step.

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "toetd/harness.hpp"
#include "toetd/learner.hpp"
#include "toetd/parallel.hpp"
#include "toetd/rng.hpp"

namespace {

toetd::ExperimentConfig chain_sweep_config(toetd::Execution execution) {
  toetd::ExperimentConfig config;
  config.environment.name = "chain";
  config.environment.num_interior = 19;
  config.episodes = 50;
  config.eval_every = 1000;
  config.seeds = {1, 2, 3, 4, 5, 6, 7, 8};
  config.execution = execution;
  return config;
}

void BM_Sweep(benchmark::State& state) {
  const auto execution = state.range(0) == 0 ? toetd::Execution::serial : toetd::Execution::parallel;
  const auto config = chain_sweep_config(execution);
  const std::vector<std::string> alphas = {"0.05", "0.1", "0.2", "0.4"};
  const std::vector<double> lambdas = {0.0, 0.5, 0.9};
  for (auto _ : state) {
    auto cells = toetd::sweep(config, alphas, lambdas);
    benchmark::DoNotOptimize(cells);
  }
  state.SetLabel(execution == toetd::Execution::serial ? "serial" : "parallel x" + std::to_string(toetd::worker_threads()));
}
BENCHMARK(BM_Sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_LearnStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  toetd::Rng rng(7);
  toetd::GvfStep step;
  step.step_size = 0.01 / static_cast<double>(n);
  step.interest = 1.0;
  step.bootstrap = 0.9;
  step.importance_ratio = 1.0;
  step.next_discount = 0.9;
  step.features.resize(n);
  step.next_features.resize(n);
  for (auto& f : step.features) f = rng.uniform();
  for (auto& f : step.next_features) f = rng.uniform();
  toetd::TrueOnlineEmphaticTd learner(n);
  for (auto _ : state) {
    step.cumulant = rng.uniform();
    benchmark::DoNotOptimize(learner.learn(step));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_LearnStep)->Arg(8)->Arg(64)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
