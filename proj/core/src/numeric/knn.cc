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

#include "ofuse/numeric/knn.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "ofuse/error.h"

namespace ofuse {

Neighbors KnnDistances(const FeatureMatrix& x, std::size_t query_index, std::size_t k) {
  const std::size_t n = x.samples();
  Require(query_index < n, ErrorKind::kDomain, "knn query index out of range");
  Require(k >= 1 && k < n, ErrorKind::kDomain, "knn needs 1 <= k <= n - 1");

  std::vector<std::pair<double, std::size_t>> candidates;
  candidates.reserve(n - 1);
  const auto query = x.sample(query_index);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == query_index) continue;
    candidates.emplace_back(SquaredDistance(query, x.sample(i)), i);
  }
  // Pair ordering compares distance first, then index.
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<long>(k),
                    candidates.end());

  Neighbors out;
  out.indices.reserve(k);
  out.distances.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    out.indices.push_back(candidates[j].second);
    out.distances.push_back(std::sqrt(candidates[j].first));
  }
  return out;
}

}  // namespace ofuse
