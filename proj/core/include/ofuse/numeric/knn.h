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

#ifndef OFUSE_NUMERIC_KNN_H_
#define OFUSE_NUMERIC_KNN_H_

#include <cstddef>
#include <vector>

#include "ofuse/numeric/matrix.h"

namespace ofuse {

struct Neighbors {
  std::vector<std::size_t> indices;
  std::vector<double> distances;  // Euclidean, ascending
};

// The k nearest samples to `query_index`, excluding the query itself. Ties
// in distance go to the lower sample index. Throws kDomain unless
// 1 <= k <= n - 1.
Neighbors KnnDistances(const FeatureMatrix& x, std::size_t query_index, std::size_t k);

}  // namespace ofuse

#endif  // OFUSE_NUMERIC_KNN_H_
