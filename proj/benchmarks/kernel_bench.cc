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

// Forward and backward cost of the model kernels at toy-model sizes.

#include <vector>

#include "benchmark/benchmark.h"
#include "ofuse/model/attention.h"
#include "ofuse/model/dgmp.h"
#include "ofuse/model/toy.h"
#include "ofuse/numeric/conv2d.h"
#include "ofuse/numeric/rng.h"

namespace ofuse {
namespace {

Tensor3 RandomTensor(std::size_t c, std::size_t h, std::size_t w, std::uint64_t seed) {
  RngStream rng(seed);
  Tensor3 t(c, h, w);
  for (double& v : t.data) v = rng.Uniform(-1.0, 1.0);
  return t;
}

Tensor4 RandomKernel(std::size_t out, std::size_t in, std::size_t k) {
  RngStream rng(7);
  Tensor4 t(out, in, k, k);
  for (double& v : t.data) v = rng.Uniform(-0.5, 0.5);
  return t;
}

void BM_Conv2dSame(benchmark::State& state) {
  const std::size_t c = state.range(0), side = state.range(1);
  const Tensor3 x = RandomTensor(c, side, side, 1);
  const Tensor4 k = RandomKernel(c, c, 3);
  for (auto _ : state) benchmark::DoNotOptimize(Conv2d(x, k, Padding::kSame));
}
BENCHMARK(BM_Conv2dSame)->Args({1, 16})->Args({16, 8})->Args({16, 32});

void BM_Conv2dBackward(benchmark::State& state) {
  const std::size_t c = state.range(0), side = state.range(1);
  const Tensor3 x = RandomTensor(c, side, side, 1);
  const Tensor4 k = RandomKernel(c, c, 3);
  const Tensor3 up = RandomTensor(c, side, side, 2);
  for (auto _ : state) benchmark::DoNotOptimize(Conv2dBackward(x, k, Padding::kSame, up));
}
BENCHMARK(BM_Conv2dBackward)->Args({16, 8})->Args({16, 32});

void BM_DgmpForward(benchmark::State& state) {
  const std::size_t d = state.range(0), side = state.range(1);
  const ActivationVolume v = RandomTensor(d, side, side, 3);
  for (auto _ : state) benchmark::DoNotOptimize(DgmpForward(v, 1.0));
  state.SetComplexityN(side * side);
}
BENCHMARK(BM_DgmpForward)->Args({16, 2})->Args({64, 4})->Args({256, 7})->Args({256, 14});

void BM_DgmpBackward(benchmark::State& state) {
  const std::size_t d = state.range(0), side = state.range(1);
  const ActivationVolume v = RandomTensor(d, side, side, 3);
  const std::vector<double> g(d, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(DgmpBackward(v, 1.0, g));
}
BENCHMARK(BM_DgmpBackward)->Args({16, 2})->Args({256, 7});

void BM_MultiHeadAttention(benchmark::State& state) {
  const std::size_t d = state.range(0), side = state.range(1);
  const ActivationVolume v = RandomTensor(d, side, side, 4);
  AttentionConfig cfg;
  MultiHeadParams p = MultiHeadParams::Init(d, cfg);
  RngStream rng(5);
  RandomizeParams(p, rng, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(MultiHeadAttention(v, p));
}
BENCHMARK(BM_MultiHeadAttention)->Args({16, 2})->Args({64, 14});

void BM_MultiHeadAttentionBackward(benchmark::State& state) {
  const std::size_t d = state.range(0), side = state.range(1);
  const ActivationVolume v = RandomTensor(d, side, side, 4);
  const ActivationVolume up = RandomTensor(d, side, side, 6);
  AttentionConfig cfg;
  MultiHeadParams p = MultiHeadParams::Init(d, cfg);
  RngStream rng(5);
  RandomizeParams(p, rng, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(MultiHeadAttentionBackward(v, p, up));
}
BENCHMARK(BM_MultiHeadAttentionBackward)->Args({16, 2})->Args({64, 14});

void BM_ToyBatchGradient(benchmark::State& state) {
  ToyModelConfig cfg;
  cfg.attention = AttentionConfig{};
  const ToyParams params = ToyParams::Init(cfg, 1);
  const LabeledImages data = MakeTextureDataset(64, cfg.image_size, 2);
  std::vector<const ImageArray*> batch;
  for (const ImageArray& img : data.images) batch.push_back(&img);
  const FocalLossConfig focal;
  for (auto _ : state)
    benchmark::DoNotOptimize(ToyBatchGradient(cfg, params, batch, data.labels, focal));
  state.SetItemsProcessed(state.iterations() * batch.size());
}
BENCHMARK(BM_ToyBatchGradient)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace ofuse

BENCHMARK_MAIN();
