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

#ifndef OFUSE_MODEL_FOCAL_LOSS_H_
#define OFUSE_MODEL_FOCAL_LOSS_H_

#include <cstddef>
#include <span>
#include <vector>

namespace ofuse {

// p_t is floored here before the log.
inline constexpr double kProbabilityFloor = 1e-12;

struct FocalLossConfig {
  double gamma = 2.0;
  std::vector<double> class_weights;  // empty means all ones

  void Validate(std::size_t n_classes) const;
};

// Max-shifted softmax.
std::vector<double> Softmax(std::span<const double> logits);

struct FocalLossValue {
  double loss = 0.0;
  std::vector<double> grad;  // with respect to the logits behind probs
};

// -w_t (1 - p_t)^gamma log(max(p_t, floor)). probs must sum to 1 within
// 1e-8; target outside [0, classes) is kDomain.
FocalLossValue FocalLoss(std::span<const double> probs, std::size_t target,
                         const FocalLossConfig& cfg);

// Inverse-frequency weights normalized to mean one over present classes;
// absent classes get weight 0.
std::vector<double> InverseFrequencyWeights(std::span<const int> labels, std::size_t n_classes);

}  // namespace ofuse

#endif  // OFUSE_MODEL_FOCAL_LOSS_H_
