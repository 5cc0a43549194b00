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

#include "ofuse/outlier/lof.h"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "ofuse/error.h"
#include "ofuse/numeric/parallel.h"
#include "unique_rows.h"

namespace ofuse {
namespace {

struct NeighborGroup {
  std::size_t group;
  std::size_t multiplicity;
  double distance;
};

}  // namespace

ScoreVector LofScores(const FeatureMatrix& x, std::size_t k) {
  const std::size_t n = x.samples();
  Require(k >= 1 && k < n, ErrorKind::kDomain, "LOF needs 1 <= k <= n - 1");

  const internal::UniqueRows unique = internal::GroupUniqueRows(x);
  const std::size_t groups = unique.counts.size();
  std::vector<double> k_distance(groups, 0.0);
  std::vector<std::vector<NeighborGroup>> neighborhoods(groups);

  ParallelFor(groups, [&](std::size_t u) {
    const auto point = unique.points.row(u);
    std::vector<std::pair<double, std::size_t>> others;
    others.reserve(groups - 1);
    for (std::size_t v = 0; v < groups; ++v) {
      if (v != u) others.emplace_back(SquaredDistance(point, unique.points.row(v)), v);
    }
    std::sort(others.begin(), others.end());

    const std::size_t copies = unique.counts[u] - 1;
    double kdist_sq = 0.0;
    if (copies < k) {
      std::size_t seen = copies;
      for (const auto& [dsq, v] : others) {
        seen += unique.counts[v];
        if (seen >= k) {
          kdist_sq = dsq;
          break;
        }
      }
    }
    auto& hood = neighborhoods[u];
    if (copies > 0) hood.push_back({u, copies, 0.0});
    for (const auto& [dsq, v] : others) {
      if (dsq > kdist_sq) break;
      hood.push_back({v, unique.counts[v], std::sqrt(dsq)});
    }
    k_distance[u] = std::sqrt(kdist_sq);
  });

  std::vector<double> density(groups, 0.0);
  for (std::size_t u = 0; u < groups; ++u) {
    double reach_sum = 0.0;
    std::size_t size = 0;
    for (const auto& nb : neighborhoods[u]) {
      reach_sum += static_cast<double>(nb.multiplicity) *
                   std::max(k_distance[nb.group], nb.distance);
      size += nb.multiplicity;
    }
    density[u] = 1.0 / (reach_sum / static_cast<double>(size) + kLofDensityEpsilon);
  }

  std::vector<double> group_score(groups, 0.0);
  for (std::size_t u = 0; u < groups; ++u) {
    double ratio_sum = 0.0;
    std::size_t size = 0;
    for (const auto& nb : neighborhoods[u]) {
      ratio_sum += static_cast<double>(nb.multiplicity) * (density[nb.group] / density[u]);
      size += nb.multiplicity;
    }
    group_score[u] = ratio_sum / static_cast<double>(size);
  }

  ScoreVector scores(n);
  for (std::size_t i = 0; i < n; ++i) scores[i] = group_score[unique.group_of[i]];
  return scores;
}

}  // namespace ofuse
