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

#ifndef OFUSE_SRC_OUTLIER_UNIQUE_ROWS_H_
#define OFUSE_SRC_OUTLIER_UNIQUE_ROWS_H_

#include <cstddef>
#include <vector>

#include "ofuse/numeric/matrix.h"

namespace ofuse::internal {

// Groups bit-identical rows. Demographic features are heavily duplicated,
// and both LOF and the one-class SVM are exactly expressible over distinct
// rows with multiplicities.
struct UniqueRows {
  Matrix points;                      // one row per distinct sample
  std::vector<std::size_t> counts;    // multiplicity of each distinct row
  std::vector<std::size_t> group_of;  // sample index -> distinct row
};

UniqueRows GroupUniqueRows(const FeatureMatrix& x);

}  // namespace ofuse::internal

#endif  // OFUSE_SRC_OUTLIER_UNIQUE_ROWS_H_
