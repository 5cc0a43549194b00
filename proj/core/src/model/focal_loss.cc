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

#include "ofuse/model/focal_loss.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "ofuse/error.h"

namespace ofuse {

void FocalLossConfig::Validate(std::size_t n_classes) const {
  Require(std::isfinite(gamma) && gamma >= 0.0, ErrorKind::kConfig,
          "focal gamma must be finite and >= 0");
  Require(class_weights.empty() || class_weights.size() == n_classes, ErrorKind::kConfig,
          "need one class weight per class");
  for (double w : class_weights) {
    Require(std::isfinite(w) && w >= 0.0, ErrorKind::kConfig,
            "class weights must be finite and >= 0");
  }
}

std::vector<double> Softmax(std::span<const double> logits) {
  Require(!logits.empty(), ErrorKind::kShape, "softmax of an empty vector");
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += p[i] = std::exp(logits[i] - top);
  for (double& v : p) v /= sum;
  return p;
}

FocalLossValue FocalLoss(std::span<const double> probs, std::size_t target,
                         const FocalLossConfig& cfg) {
  const std::size_t k = probs.size();
  Require(target < k, ErrorKind::kDomain,
          "target class " + std::to_string(target) + " outside [0, " + std::to_string(k) + ")");
  cfg.Validate(k);
  double sum = 0.0;
  for (double p : probs) sum += p;
  Require(std::abs(sum - 1.0) <= 1e-8, ErrorKind::kDomain, "probabilities do not sum to 1");

  const double weight = cfg.class_weights.empty() ? 1.0 : cfg.class_weights[target];
  const double pt = probs[target];
  const bool floored = pt < kProbabilityFloor;
  const double p = floored ? kProbabilityFloor : pt;
  const double q = 1.0 - p;
  const double log_p = std::log(p);
  const double modulator = cfg.gamma == 0.0 ? 1.0 : std::pow(q, cfg.gamma);

  FocalLossValue out;
  out.loss = -weight * modulator * log_p;
  out.grad.assign(k, 0.0);
  if (floored) return out;  // the floor is flat below kProbabilityFloor

  // s = p_t dL/dp_t; dp_t/dz_j = p_t (delta_tj - p_j).
  double focus = 0.0;
  if (cfg.gamma != 0.0 && q > 0.0) focus = cfg.gamma * std::pow(q, cfg.gamma - 1.0) * p * log_p;
  const double s = weight * (focus - modulator);
  for (std::size_t j = 0; j < k; ++j) {
    out.grad[j] = s * ((j == target ? 1.0 : 0.0) - probs[j]);
  }
  return out;
}

std::vector<double> InverseFrequencyWeights(std::span<const int> labels, std::size_t n_classes) {
  std::vector<double> counts(n_classes, 0.0);
  for (int y : labels) {
    Require(y >= 0 && std::size_t(y) < n_classes, ErrorKind::kDomain, "label out of range");
    counts[y] += 1.0;
  }
  std::vector<double> w(n_classes, 0.0);
  double total = 0.0;
  std::size_t present = 0;
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (counts[c] > 0.0) {
      w[c] = 1.0 / counts[c];
      total += w[c];
      ++present;
    }
  }
  for (double& v : w) v *= total > 0.0 ? double(present) / total : 0.0;
  return w;
}

}  // namespace ofuse
