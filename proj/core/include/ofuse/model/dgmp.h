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

#ifndef OFUSE_MODEL_DGMP_H_
#define OFUSE_MODEL_DGMP_H_

#include <span>
#include <vector>

#include "ofuse/model/volume.h"
#include "ofuse/numeric/matrix.h"

namespace ofuse {

inline constexpr double kDefaultDgmpLambda = 1.0;

// Generalized max pooling: alpha = (K + lambda I)^-1 1, xi = Phi alpha,
// with K = Phi^T Phi.
struct DgmpSolution {
  std::vector<double> alpha;  // n
  std::vector<double> xi;     // d
  double lambda = 0.0;
  Matrix gram;                // n x n
};

// lambda must be >= 0. A Gram system that is not positive definite is a
// kNumeric "singular Gram" error (only reachable at lambda = 0 in exact
// arithmetic).
DgmpSolution DgmpForward(const ActivationVolume& vol, double lambda);

// Gradient of <upstream, xi> with respect to every entry of vol:
// g alpha^T - xi v^T - (Phi v) alpha^T with v = (K + lambda I)^-1 Phi^T g.
ActivationVolume DgmpBackward(const ActivationVolume& vol, double lambda,
                              std::span<const double> upstream);

}  // namespace ofuse

#endif  // OFUSE_MODEL_DGMP_H_
