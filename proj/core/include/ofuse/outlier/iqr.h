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

#ifndef OFUSE_OUTLIER_IQR_H_
#define OFUSE_OUTLIER_IQR_H_

#include "ofuse/numeric/matrix.h"
#include "ofuse/outlier/detector.h"

namespace ofuse {

// Flags a sample when any of its features lies strictly outside that
// feature's Tukey fences. Needs n >= 4 (kDomain "insufficient data").
FlagVector IqrDetect(const FeatureMatrix& x);

// Largest fence excess over features, in IQR units (0 inside the fences).
// Reporting aid; the IQR vote comes from IqrDetect.
ScoreVector IqrScores(const FeatureMatrix& x);

}  // namespace ofuse

#endif  // OFUSE_OUTLIER_IQR_H_
