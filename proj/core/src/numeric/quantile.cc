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

#include "ofuse/numeric/quantile.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ofuse/error.h"

namespace ofuse {

double Quantile(std::span<const double> sorted_data, double q) {
  Require(!sorted_data.empty(), ErrorKind::kDomain, "quantile of empty data");
  Require(q >= 0.0 && q <= 1.0, ErrorKind::kDomain, "quantile level outside [0, 1]");
  const double rank = q * static_cast<double>(sorted_data.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = std::min(lo + 1, sorted_data.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  if (frac == 0.0) return sorted_data[lo];
  return sorted_data[lo] + frac * (sorted_data[hi] - sorted_data[lo]);
}

QuantileSummary SummarizeQuartiles(std::span<const double> data) {
  std::vector<double> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end());
  QuantileSummary s;
  s.q1 = Quantile(sorted, 0.25);
  s.q3 = Quantile(sorted, 0.75);
  s.iqr = s.q3 - s.q1;
  s.lower_fence = s.q1 - 1.5 * s.iqr;
  s.upper_fence = s.q3 + 1.5 * s.iqr;
  return s;
}

}  // namespace ofuse
