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

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "ofuse/error.h"
#include "ofuse/model/toy.h"
#include "support/oracles.h"

namespace ofuse {
namespace {

ToyModelConfig TinyModel(PoolingKind pooling, std::optional<AttentionPlacement> placement) {
  ToyModelConfig cfg;
  cfg.image_size = 8;
  cfg.channels = {2, 2, 2};
  cfg.pooling = pooling;
  if (placement) {
    AttentionConfig a;
    a.reduction = 2;
    a.spatial_kernel = 3;
    a.placement = *placement;
    cfg.attention = a;
  }
  return cfg;
}

template <typename F>
void ForEachValue(ToyParams& p, F&& f) {
  p.ForEachTensor([&](const std::string&, const TensorShape&, std::span<double> v) {
    for (double& x : v) f(x);
  });
}

TEST(ToyTest, BackpropMatchesFiniteDifferences) {
  const LabeledImages data = MakeTextureDataset(3, 8, 1);
  std::vector<const ImageArray*> batch;
  for (const ImageArray& im : data.images) batch.push_back(&im);
  FocalLossConfig focal;

  for (PoolingKind pooling : {PoolingKind::kDgmp, PoolingKind::kGlobalMax}) {
    for (auto placement : {std::optional<AttentionPlacement>{}, std::optional{AttentionPlacement::kSelf},
                           std::optional{AttentionPlacement::kTraditional}}) {
      const ToyModelConfig cfg = TinyModel(pooling, placement);
      ToyParams params = ToyParams::Init(cfg, 3);
      RngStream rng(4);
      ForEachValue(params, [&](double& x) { x += 0.3 * rng.Normal(); });

      std::vector<double> flat;
      ForEachValue(params, [&](double& x) { flat.push_back(x); });
      auto loss = [&](std::span<const double> values) {
        ToyParams p = params;
        std::size_t i = 0;
        ForEachValue(p, [&](double& x) { x = values[i++]; });
        return ToyBatchGradient(cfg, p, batch, data.labels, focal).loss;
      };
      ToyLossGradient lg = ToyBatchGradient(cfg, params, batch, data.labels, focal);
      std::vector<double> analytic;
      ForEachValue(lg.grads, [&](double& x) { analytic.push_back(x); });
      const auto numeric = testing::CentralDifference(loss, flat, 1e-5);
      EXPECT_LE(testing::MaxRelativeError(analytic, numeric), 1e-4)
          << PoolingName(pooling) << " "
          << (placement ? AttentionPlacementName(*placement) : "none");
    }
  }
}

TEST(ToyTest, ZeroLearningRateLeavesParametersBitIdentical) {
  const LabeledImages data = MakeTextureDataset(80, 8, 2);
  const ToyModelConfig cfg = TinyModel(PoolingKind::kDgmp, AttentionPlacement::kTraditional);
  TrainConfig train;
  train.epochs = 3;
  train.batch_size = 16;
  train.adam.learning_rate = 0.0;
  train.seed = 5;
  const TrainResult result = TrainToy(data, cfg, train);
  EXPECT_GT(result.steps, 0u);
  EXPECT_TRUE(result.params == ToyParams::Init(cfg, train.seed));
}

TEST(ToyTest, OverfitsASingleBatch) {
  const LabeledImages data = MakeTextureDataset(8, 16, 3);
  ToyModelConfig cfg;
  AttentionConfig a;
  cfg.attention = a;
  ToyParams params = ToyParams::Init(cfg, 6);
  TrainConfig train;
  train.adam.learning_rate = 1e-2;
  const auto losses = OverfitBatch(cfg, params, data.images, data.labels, train, 200);
  EXPECT_GT(losses.front(), 0.5);
  EXPECT_LT(losses.back(), 0.05);
}

TEST(ToyTest, TrainingIsDeterministicAndTraced) {
  const LabeledImages data = MakeTextureDataset(80, 8, 4);
  const ToyModelConfig cfg = TinyModel(PoolingKind::kGlobalMax, std::nullopt);
  TrainConfig train;
  train.epochs = 2;
  train.batch_size = 16;
  train.adam.learning_rate = 1e-3;
  const TrainResult a = TrainToy(data, cfg, train), b = TrainToy(data, cfg, train);
  EXPECT_TRUE(a.params == b.params);
  ASSERT_EQ(a.trace.size(), 4u);
  EXPECT_EQ(a.trace[0].split, "train");
  EXPECT_EQ(a.trace[1].split, "test");
  EXPECT_EQ(a.test_predictions.size(), 16u);

  std::ostringstream csv;
  WriteTraceCsv(csv, a.trace);
  const std::string text = csv.str();
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "epoch,split,loss,accuracy,macro_f1,specificity,sensitivity");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
}

TEST(ToyTest, ParametersRoundTripThroughBlobAndManifest) {
  const ToyModelConfig cfg = TinyModel(PoolingKind::kDgmp, AttentionPlacement::kSelf);
  ToyParams params = ToyParams::Init(cfg, 7);
  RngStream rng(8);
  ForEachValue(params, [&](double& x) { x = rng.Normal(); });
  std::ostringstream blob, manifest;
  WriteParameters(params, blob, manifest);
  EXPECT_EQ(manifest.str().substr(0, manifest.str().find('\n')),
            "attention.channel.w1 1x1 0");

  ToyParams restored = ToyParams::Init(cfg, 9);
  std::istringstream blob_in(blob.str()), manifest_in(manifest.str());
  ReadParameters(restored, blob_in, manifest_in);
  EXPECT_TRUE(restored == params);

  std::istringstream short_blob(blob.str().substr(0, 16)), manifest_again(manifest.str());
  EXPECT_THROW(ReadParameters(restored, short_blob, manifest_again), Error);
}

TEST(ToyTest, DivergenceNamesTheStep) {
  const LabeledImages data = MakeTextureDataset(8, 8, 5);
  const ToyModelConfig cfg = TinyModel(PoolingKind::kGlobalMax, std::nullopt);
  ToyParams params = ToyParams::Init(cfg, 5);
  for (auto& conv : params.conv)
    for (double& w : conv.data) w = 1e200;
  try {
    OverfitBatch(cfg, params, data.images, data.labels, TrainConfig{}, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNumeric);
    EXPECT_NE(std::string(e.what()).find("at step 1"), std::string::npos) << e.what();
  }
}

TEST(ToyTest, ConfigValidation) {
  ToyModelConfig cfg;
  cfg.image_size = 12;
  EXPECT_THROW(cfg.Validate(), Error);
  cfg.image_size = 16;
  AttentionConfig a;
  a.reduction = 3;
  cfg.attention = a;
  EXPECT_THROW(cfg.Validate(), Error);
  a.placement = AttentionPlacement::kSelf;  // reduction ignored on the image
  cfg.attention = a;
  EXPECT_NO_THROW(cfg.Validate());
}

TEST(ToyTest, TextureClassesAreBalanced) {
  const LabeledImages data = MakeTextureDataset(800, 16, 0);
  std::vector<int> counts(4, 0);
  for (int y : data.labels) ++counts[y];
  EXPECT_EQ(counts, (std::vector<int>{200, 200, 200, 200}));
  for (const ImageArray& im : data.images)
    for (double v : im.pixels()) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
}

}  // namespace
}  // namespace ofuse
