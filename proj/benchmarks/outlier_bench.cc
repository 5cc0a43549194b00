// Copyright 2026 The Outlier Fusion Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Detector and fusion throughput on Gaussian 2-feature data.

#include <vector>

#include "benchmark/benchmark.h"
#include "ofuse/numeric/matrix.h"
#include "ofuse/numeric/rng.h"
#include "ofuse/outlier/fusion.h"
#include "ofuse/outlier/isolation_forest.h"
#include "ofuse/outlier/lof.h"
#include "ofuse/outlier/mcd.h"
#include "ofuse/outlier/ocsvm.h"

namespace ofuse {
namespace {

FeatureMatrix GaussianData(std::size_t n) {
  RngStream rng(42);
  std::vector<double> values(n * 2);
  for (double& v : values) v = rng.Normal();
  return FeatureMatrix(n, 2, std::move(values));
}

void BM_Lof(benchmark::State& state) {
  const FeatureMatrix x = GaussianData(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(LofScores(x, 20));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Lof)->RangeMultiplier(4)->Range(256, 4096)->Complexity();

void BM_IsolationForest(benchmark::State& state) {
  const FeatureMatrix x = GaussianData(state.range(0));
  const DetectorConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(IsolationForestScores(x, cfg));
}
BENCHMARK(BM_IsolationForest)->RangeMultiplier(4)->Range(256, 4096);

void BM_Ocsvm(benchmark::State& state) {
  const FeatureMatrix x = GaussianData(state.range(0));
  const DetectorConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(OcsvmScores(x, cfg));
}
BENCHMARK(BM_Ocsvm)->RangeMultiplier(4)->Range(256, 1024)->Unit(benchmark::kMillisecond);

void BM_FastMcd(benchmark::State& state) {
  const FeatureMatrix x = GaussianData(state.range(0));
  const DetectorConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(McdScores(x, cfg));
}
BENCHMARK(BM_FastMcd)->RangeMultiplier(4)->Range(256, 4096)->Unit(benchmark::kMillisecond);

void BM_Fusion(benchmark::State& state) {
  const FeatureMatrix x = GaussianData(state.range(0));
  const DetectorConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(RunFusion(x, cfg));
}
BENCHMARK(BM_Fusion)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace ofuse

BENCHMARK_MAIN();
