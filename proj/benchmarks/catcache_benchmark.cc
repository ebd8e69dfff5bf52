/*
Copyright 2026 The catcache Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include <vector>

#include "benchmark/benchmark.h"
#include "catcache/allocator.h"
#include "catcache/placement.h"
#include "catcache/simulator.h"

namespace catcache {
namespace {

CacheProblem Reference() {
  CacheProblem p;
  p.library = MakeLibrary({20, 20, 20, 20, 20}, 1.0, 5.0, 2.4, 69.0);
  return p;
}

void BM_WaterFillingPoisson(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const std::vector<double> w = MandelbrotZipf(n, 2.4, 69.0).probs;
  const NetworkModel net = NetworkModel::PoissonDisk(0.02, 10.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(OptimalWithinCategory(w, n / 3, net));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_WaterFillingPoisson)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_WaterFillingExplicitPmf(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const std::vector<double> w = MandelbrotZipf(n, 2.4, 69.0).probs;
  const NetworkModel net =
      NetworkModel::ExplicitPmf({0.1, 0.2, 0.3, 0.2, 0.1, 0.05, 0.05});
  for (auto _ : state) {
    benchmark::DoNotOptimize(OptimalWithinCategory(w, n / 3, net));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_WaterFillingExplicitPmf)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_EvaluateCached(benchmark::State& state) {
  const CacheProblem p = Reference();
  AllocationEvaluator evaluator(p, PlacementWeighting::kWithinCategory);
  const std::vector<int> alpha = {12, 9, 6, 3, 0};
  evaluator.Evaluate(alpha, Objective::kHitRate, ObjectiveMode::kPaperVerbatim);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluator.Evaluate(alpha, Objective::kHitRate,
                                                ObjectiveMode::kPaperVerbatim));
  }
}
BENCHMARK(BM_EvaluateCached);

void BM_GreedyAllocate(benchmark::State& state) {
  const CacheProblem p = Reference();
  AllocatorConfig config;
  config.objective =
      state.range(0) ? Objective::kExpectedLength : Objective::kHitRate;
  for (auto _ : state) {
    benchmark::DoNotOptimize(GreedyAllocate(p, config));
  }
}
BENCHMARK(BM_GreedyAllocate)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_BaselineOneShot(benchmark::State& state) {
  const CacheProblem p = Reference();
  for (auto _ : state) {
    benchmark::DoNotOptimize(BaselineOneShot(p));
  }
}
BENCHMARK(BM_BaselineOneShot)->Unit(benchmark::kMicrosecond);

void BM_SimulateSessions(benchmark::State& state) {
  const CacheProblem p = Reference();
  const AllocationResult r = GreedyAllocate(p, AllocatorConfig{});
  SimConfig config;
  config.n_sessions = state.range(0);
  config.field = state.range(1) ? FieldResampling::kPerSession
                                : FieldResampling::kPerRequest;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        EstimateObjectives(config, p.library, p.epsilon, r.allocation, r.policy));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateSessions)
    ->Args({10000, 0})
    ->Args({10000, 1})
    ->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace catcache

BENCHMARK_MAIN();
