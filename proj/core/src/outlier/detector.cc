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

#include "ofuse/outlier/detector.h"

#include "ofuse/error.h"

namespace ofuse {

std::string_view DetectorName(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::kIqr:
      return "iqr";
    case DetectorKind::kLof:
      return "lof";
    case DetectorKind::kOcsvm:
      return "ocsvm";
    case DetectorKind::kIsolationForest:
      return "iforest";
    case DetectorKind::kEllipticEnvelope:
      return "elliptic";
  }
  return "unknown";
}

void DetectorConfig::Validate() const {
  Require(contamination > 0.0 && contamination <= 0.5, ErrorKind::kConfig,
          "contamination must lie in (0, 0.5]");
  Require(lof_k >= 1, ErrorKind::kConfig, "lof_k must be positive");
  Require(iforest_trees >= 1, ErrorKind::kConfig, "iforest_trees must be positive");
  Require(iforest_subsample >= 2, ErrorKind::kConfig, "iforest_subsample must be >= 2");
  Require(nu() > 0.0 && nu() <= 1.0, ErrorKind::kConfig, "ocsvm_nu must lie in (0, 1]");
  Require(!ocsvm_gamma || *ocsvm_gamma > 0.0, ErrorKind::kConfig,
          "ocsvm_gamma must be positive");
  Require(ocsvm_tolerance > 0.0, ErrorKind::kConfig, "ocsvm_tolerance must be positive");
  Require(ocsvm_max_iterations >= 1, ErrorKind::kConfig,
          "ocsvm_max_iterations must be positive");
  Require(mcd_restarts >= 1, ErrorKind::kConfig, "mcd_restarts must be positive");
  Require(mcd_max_csteps >= 1, ErrorKind::kConfig, "mcd_max_csteps must be positive");
}

std::size_t MinimumMcdSupport(std::size_t n, std::size_t d) { return (n + d + 2) / 2; }

}  // namespace ofuse
