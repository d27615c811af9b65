// Copyright 2026 The lorenz-rank Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "lorenz_rank/direction.hpp"
#include "lorenz_rank/eval_harness.hpp"
#include "lorenz_rank/isotonic_projection.hpp"
#include "lorenz_rank/optimizer.hpp"

namespace {

using namespace lorenz_rank;

std::vector<double> gaussian(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 10.0);
  std::vector<double> z(n);
  for (double& x : z) x = g(rng);
  return z;
}

void BM_Projection(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  PermutahedronProjector proj(gini_weights(n));
  const std::vector<double> z = gaussian(n, 1);
  std::vector<double> y(n);
  for (auto _ : state) {
    proj.project(z, 1.0, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetComplexityN(state.range(0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Projection)
    ->RangeMultiplier(10)
    ->Range(1000, 1000000)
    ->Unit(benchmark::kMicrosecond)
    ->Complexity(benchmark::oNLogN);

void BM_Pav(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::vector<double> s = gaussian(n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pav_nondecreasing(s));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Pav)
    ->RangeMultiplier(10)
    ->Range(1000, 1000000)
    ->Unit(benchmark::kMicrosecond)
    ->Complexity(benchmark::oN);

// Per-user top-K on a square instance of side range(0).
void BM_BestResponse(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PreferenceMatrix prefs = synthetic_prefs(n, n, 0.5, 3);
  DirectionScores scores;
  scores.user_scale = gaussian(n, 4);
  scores.item_offset = gaussian(n, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(best_response(scores, prefs, 10));
  }
  state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(BM_BestResponse)
    ->Arg(100)
    ->Arg(316)
    ->Arg(1000)
    ->Unit(benchmark::kMicrosecond)
    ->Complexity(benchmark::oN);

// Frank-Wolfe cost per iteration over a 10x sweep of n * m.
void BM_FrankWolfeIteration(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PreferenceMatrix prefs = synthetic_prefs(n, n, 0.5, 6);
  const ExposureWeights exposure = dcg_exposure_weights(n, 10);
  OptimizerConfig config;
  config.iterations = 20;
  config.trace_every = 20;
  config.record_wall_time = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(frank_wolfe(config, prefs, exposure).objective);
  }
  state.SetComplexityN(state.range(0) * state.range(0));
  // items_per_second is Frank-Wolfe iterations per second.
  state.SetItemsProcessed(state.iterations() * config.iterations);
}
BENCHMARK(BM_FrankWolfeIteration)
    ->Arg(100)
    ->Arg(316)
    ->Arg(1000)
    ->Unit(benchmark::kMillisecond)
    ->Complexity(benchmark::oN);

}  // namespace

BENCHMARK_MAIN();
