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

#include "ofuse/outlier/iqr.h"

#include <algorithm>
#include <vector>

#include "ofuse/error.h"
#include "ofuse/numeric/quantile.h"

namespace ofuse {
namespace {

std::vector<QuantileSummary> FeatureFences(const FeatureMatrix& x) {
  Require(x.samples() >= 4, ErrorKind::kDomain, "insufficient data for IQR (need n >= 4)");
  std::vector<QuantileSummary> fences;
  fences.reserve(x.features());
  for (std::size_t c = 0; c < x.features(); ++c) {
    fences.push_back(SummarizeQuartiles(x.feature(c)));
  }
  return fences;
}

}  // namespace

FlagVector IqrDetect(const FeatureMatrix& x) {
  const auto fences = FeatureFences(x);
  FlagVector flags(x.samples(), false);
  for (std::size_t r = 0; r < x.samples(); ++r) {
    for (std::size_t c = 0; c < x.features(); ++c) {
      const double v = x(r, c);
      if (v < fences[c].lower_fence || v > fences[c].upper_fence) {
        flags[r] = true;
        break;
      }
    }
  }
  return flags;
}

ScoreVector IqrScores(const FeatureMatrix& x) {
  const auto fences = FeatureFences(x);
  ScoreVector scores(x.samples(), 0.0);
  for (std::size_t r = 0; r < x.samples(); ++r) {
    for (std::size_t c = 0; c < x.features(); ++c) {
      const double v = x(r, c);
      const double excess =
          std::max(fences[c].lower_fence - v, v - fences[c].upper_fence);
      if (excess <= 0.0) continue;
      const double unit = fences[c].iqr > 0.0 ? fences[c].iqr : 1.0;
      scores[r] = std::max(scores[r], excess / unit);
    }
  }
  return scores;
}

}  // namespace ofuse
