#include <benchmark/benchmark.h>

#include "mcpg/cpg.hpp"
#include "mcpg/experiments.hpp"
#include "mcpg/learner.hpp"
#include "mcpg/network.hpp"
#include "mcpg/plant.hpp"

using namespace mcpg;

static void BM_MapStep(benchmark::State& state) {
  CpgState s = kDefaultInit;
  const CpgParams params;
  for (auto _ : state) {
    s = step(s, params);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_MapStep);

static void BM_ControlledStep(benchmark::State& state) {
  ControlledCpg cpg(CpgParams{}, {static_cast<int>(state.range(0)), 0.05, ControlLaw::kOrbitReferenced, true});
  for (auto _ : state) benchmark::DoNotOptimize(cpg.advance());
}
BENCHMARK(BM_ControlledStep)->Arg(4)->Arg(9);

static void BM_NetworkStep(benchmark::State& state) {
  CpgNetwork net(Morphology::kHexapod);
  net.set_periods({{Leg::R2, 5}, {Leg::L2, 6}, {Leg::L3, 9}});
  for (auto _ : state) {
    net.step();
    benchmark::DoNotOptimize(net.state(Leg::L3));
  }
}
BENCHMARK(BM_NetworkStep);

static void BM_PlantDeviation(benchmark::State& state) {
  const PlantConfig cfg = PlantConfig::defaults(Morphology::kHexapod);
  const Scenario s{{Leg::R1}, {{Leg::R2, 5}, {Leg::R3, 4}, {Leg::L1, 5}, {Leg::L2, 6}, {Leg::L3, 5}}};
  for (auto _ : state) benchmark::DoNotOptimize(deviation(cfg, s));
}
BENCHMARK(BM_PlantDeviation);

static void BM_Learn(benchmark::State& state) {
  const Evaluator ev = plant_evaluator(PlantConfig::defaults(Morphology::kHexapod));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    LearnerConfig cfg;
    cfg.seed = seed++;
    benchmark::DoNotOptimize(learn(ev, Morphology::kHexapod, {Leg::R1, Leg::L2}, cfg));
  }
}
BENCHMARK(BM_Learn)->Unit(benchmark::kMillisecond);

static void BM_Lyapunov(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(lyapunov_estimate(CpgParams{}, 100000));
}
BENCHMARK(BM_Lyapunov)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
