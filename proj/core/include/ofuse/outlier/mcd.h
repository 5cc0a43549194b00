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

#ifndef OFUSE_OUTLIER_MCD_H_
#define OFUSE_OUTLIER_MCD_H_

#include <cstddef>
#include <span>
#include <vector>

#include "ofuse/numeric/matrix.h"
#include "ofuse/outlier/detector.h"

namespace ofuse {

struct McdEstimate {
  // Minimum-determinant h-subset and its (1/h-normalised) mean/covariance.
  std::vector<std::size_t> support;
  std::vector<double> raw_location;
  Matrix raw_covariance;
  double raw_log_det = 0.0;
  // Consistency-corrected, then reweighted on samples inside the 97.5%
  // chi-square ellipse.
  std::vector<double> location;
  Matrix covariance;
  std::size_t restarts_used = 0;  // restarts that stayed non-singular
};

// FastMCD: each restart draws a random (d+1)-subset (grown until its
// covariance is non-singular), then applies C-steps until the h-subset
// stops changing or cfg.mcd_max_csteps is reached. The lowest determinant
// over cfg.mcd_restarts restarts wins. A C-step that would make the
// covariance singular ends that restart at its last regular subset.
// Throws kDomain unless n > d, kConfig for h outside [ceil((n+d+1)/2), n],
// and kNumeric "degenerate data" when every restart is singular.
McdEstimate FitMcd(const FeatureMatrix& x, const DetectorConfig& cfg);

// sqrt((x - mu)^T S^-1 (x - mu)) for each sample; S must be SPD.
ScoreVector MahalanobisDistances(const FeatureMatrix& x, std::span<const double> location,
                                 const Matrix& covariance);

// Elliptic-envelope scores: Mahalanobis distance to the reweighted MCD fit.
ScoreVector McdScores(const FeatureMatrix& x, const DetectorConfig& cfg);

}  // namespace ofuse

#endif  // OFUSE_OUTLIER_MCD_H_
