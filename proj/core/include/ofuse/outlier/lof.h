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

#ifndef OFUSE_OUTLIER_LOF_H_
#define OFUSE_OUTLIER_LOF_H_

#include <cstddef>

#include "ofuse/numeric/matrix.h"
#include "ofuse/outlier/detector.h"

namespace ofuse {

// Added to the mean reachability distance before inverting it, so that a
// group of more than k coincident samples gets a large finite density
// instead of infinity. Such groups then score exactly 1.
inline constexpr double kLofDensityEpsilon = 1e-10;

// Local Outlier Factor with the tie-inclusive k-distance neighbourhood:
// N_k(p) holds every other sample within p's k-distance (coincident copies
// count individually). score(p) = mean over o in N_k(p) of lrd(o) / lrd(p),
// lrd(p) = 1 / (mean reach-dist_k(p, o) + kLofDensityEpsilon).
// Throws kDomain unless 1 <= k <= n - 1.
ScoreVector LofScores(const FeatureMatrix& x, std::size_t k);

}  // namespace ofuse

#endif  // OFUSE_OUTLIER_LOF_H_
