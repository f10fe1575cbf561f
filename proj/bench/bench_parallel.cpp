// Serial reference vs OpenMP execution of the three parallel loops.

#include <benchmark/benchmark.h>

#include <algorithm>
#include <thread>

#include "dtsap/bench.hpp"
#include "dtsap/instance.hpp"
#include "dtsap/policies.hpp"

using namespace dtsap;

namespace {

struct Fixture {
  SystemPreset preset = system_preset("S1");
  Instance inst = generate_instance(preset.params, preset.gen, 12);
  State state;
  std::vector<SlotId> allowed;

  Fixture() {
    state = initial_state(inst);
    state.new_customer = inst.arrivals[0][2];
    state.epoch = 3;
    allowed = assignable_slots(0, preset.params.calendar);
  }
};

Execution mode_of(const benchmark::State& s) { return s.range(0) ? Execution::Parallel : Execution::Serial; }

void BM_RolloutEvaluate(benchmark::State& s) {
  Fixture f;
  RolloutConfig cfg;
  cfg.rollouts = 10;
  cfg.future = f.preset.gen;
  cfg.fast_budget = SolverBudget{50, 0.0, 0};
  cfg.execution = mode_of(s);
  RolloutPolicy policy(std::make_shared<RandomPolicy>(), cfg, f.preset.params, f.inst.depot);
  Rng rng(1);
  for (auto _ : s) benchmark::DoNotOptimize(policy.evaluate(f.state, f.allowed, rng));
}

void BM_ScenarioEvaluate(benchmark::State& s) {
  Fixture f;
  SbpConfig cfg;
  cfg.scenarios = 30;
  cfg.dist = f.preset.gen;
  cfg.budget = SolverBudget{50, 0.0, 0};
  cfg.execution = mode_of(s);
  ScenarioPolicy policy(cfg, f.preset.params, f.inst.depot);
  Rng rng(1);
  for (auto _ : s) benchmark::DoNotOptimize(policy.evaluate(f.state, rng));
}

void BM_EpisodeBatch(benchmark::State& s) {
  BenchConfig cfg = config_from_json({{"policies", {"RAN", "SEG"}}, {"instances", 8}});
  cfg.jobs = s.range(0) ? std::max(2, static_cast<int>(std::thread::hardware_concurrency())) : 1;
  for (auto _ : s) benchmark::DoNotOptimize(run_benchmark(cfg));
}

}  // namespace

BENCHMARK(BM_RolloutEvaluate)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScenarioEvaluate)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EpisodeBatch)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
