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

#ifndef OFUSE_MODEL_TOY_H_
#define OFUSE_MODEL_TOY_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ofuse/eval/metrics.h"
#include "ofuse/metadata/image.h"
#include "ofuse/model/attention.h"
#include "ofuse/model/dgmp.h"
#include "ofuse/model/focal_loss.h"
#include "ofuse/numeric/tensor.h"

namespace ofuse {

struct LabeledImages {
  std::vector<ImageArray> images;
  std::vector<int> labels;
};

// Four balanced texture classes on size x size images: horizontal, vertical
// and diagonal gratings, and a checkerboard, each with random frequency,
// phase, contrast and pixel noise. Labels cycle 0, 1, 2, 3.
LabeledImages MakeTextureDataset(std::size_t n, std::size_t size, std::uint64_t seed);

enum class PoolingKind { kDgmp, kGlobalMax };

const char* PoolingName(PoolingKind kind);

struct ToyModelConfig {
  std::size_t image_size = 16;
  std::size_t classes = 4;
  std::array<std::size_t, 3> channels = {16, 16, 16};
  PoolingKind pooling = PoolingKind::kDgmp;
  double lambda = kDefaultDgmpLambda;
  // nullopt trains without attention. With self placement the attention
  // sees the single-channel image, so its reduction ratio is taken as 1.
  std::optional<AttentionConfig> attention;

  void Validate() const;
};

// Three conv3x3-ReLU-avgpool2 blocks, optional attention, pooling and a
// linear classifier.
struct ToyParams {
  std::optional<MultiHeadParams> attention;
  std::array<Tensor4, 3> conv;
  std::array<std::vector<double>, 3> conv_bias;
  std::vector<double> classifier;       // classes x channels[2]
  std::vector<double> classifier_bias;  // classes

  // He-normal convolutions, zero classifier, N(0, 0.1^2) attention heads
  // with a head-averaging projection.
  static ToyParams Init(const ToyModelConfig& cfg, std::uint64_t seed);

  template <typename F>
  void ForEachTensor(F&& f) {
    if (attention) {
      attention->ForEachTensor([&](const std::string& name, const TensorShape& shape,
                                   std::span<double> v) { f("attention." + name, shape, v); });
    }
    for (std::size_t b = 0; b < 3; ++b) {
      const std::string prefix = "block" + std::to_string(b + 1) + ".conv.";
      f(prefix + "weight", TensorShape{conv[b].out, conv[b].in, conv[b].kh, conv[b].kw},
        std::span<double>(conv[b].data));
      f(prefix + "bias", TensorShape{conv_bias[b].size()}, std::span<double>(conv_bias[b]));
    }
    f("classifier.weight", TensorShape{classifier_bias.size(), conv[2].out},
      std::span<double>(classifier));
    f("classifier.bias", TensorShape{classifier_bias.size()},
      std::span<double>(classifier_bias));
  }

  friend bool operator==(const ToyParams& a, const ToyParams& b);
};

// Class probabilities for one image.
std::vector<double> ToyPredict(const ToyModelConfig& cfg, const ToyParams& params,
                               const ImageArray& image);

struct ToyLossGradient {
  double loss = 0.0;
  ToyParams grads;
};

// Mean focal loss over the batch and its gradient for every parameter.
ToyLossGradient ToyBatchGradient(const ToyModelConfig& cfg, const ToyParams& params,
                                 std::span<const ImageArray* const> images,
                                 std::span<const int> labels, const FocalLossConfig& focal);

struct AdamConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct TrainConfig {
  std::size_t epochs = 30;
  std::size_t batch_size = 64;
  double test_fraction = 0.2;
  AdamConfig adam;
  FocalLossConfig focal;
  std::uint64_t seed = 0;
  // Stops after this many optimizer steps when set (epochs still bound it).
  std::optional<std::size_t> max_steps;

  void Validate() const;
};

struct TraceRow {
  std::size_t epoch = 0;
  std::string split;  // "train" or "test"
  double loss = 0.0;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  double specificity = 0.0;
  double sensitivity = 0.0;
};

struct Prediction {
  std::size_t index = 0;  // into the dataset
  int truth = 0;
  int predicted = 0;
};

struct TrainResult {
  ToyParams params;
  std::vector<TraceRow> trace;
  MetricsReport test_report;
  std::vector<Prediction> test_predictions;
  std::size_t steps = 0;
};

// Stratified 80/20 hold-out, inputs normalized with training-split
// statistics, Adam on mini-batches in a seeded order. A non-finite loss is
// a kNumeric error naming the step.
TrainResult TrainToy(const LabeledImages& data, const ToyModelConfig& model,
                     const TrainConfig& train);

// Optimizes params in place on the given examples (all of them every step).
// Returns the loss before each step and the final loss appended.
std::vector<double> OverfitBatch(const ToyModelConfig& cfg, ToyParams& params,
                                 std::span<const ImageArray> images, std::span<const int> labels,
                                 const TrainConfig& train, std::size_t steps);

// CSV: epoch,split,loss,accuracy,macro_f1,specificity,sensitivity.
void WriteTraceCsv(std::ostream& out, std::span<const TraceRow> trace);

// Flat float64 little-endian blob plus a text manifest of
// "name shape offset" lines (shape as AxBxC, offset in bytes).
void WriteParameters(ToyParams& params, std::ostream& blob, std::ostream& manifest);
// Reads values back into a params object of the same layout.
void ReadParameters(ToyParams& params, std::istream& blob, std::istream& manifest);

}  // namespace ofuse

#endif  // OFUSE_MODEL_TOY_H_
