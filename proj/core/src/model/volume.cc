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

#include "ofuse/model/volume.h"

#include <cmath>

#include "ofuse/error.h"

namespace ofuse {

void ValidateVolume(const ActivationVolume& vol) {
  Require(vol.channels >= 1 && vol.height >= 1 && vol.width >= 1, ErrorKind::kShape,
          "activation volume needs positive depth, height and width");
  Require(vol.data.size() == vol.channels * vol.plane(), ErrorKind::kShape,
          "activation volume storage does not match its extents");
  for (double v : vol.data) {
    Require(std::isfinite(v), ErrorKind::kDomain, "activation volume holds NaN or Inf");
  }
}

}  // namespace ofuse
