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

#ifndef OFUSE_NUMERIC_QUANTILE_H_
#define OFUSE_NUMERIC_QUANTILE_H_

#include <span>

namespace ofuse {

// Type-7 (linear interpolation) quantile of ascending data at rank q*(n-1).
// Throws kDomain on empty input or q outside [0, 1].
double Quantile(std::span<const double> sorted_data, double q);

struct QuantileSummary {
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
  double lower_fence = 0.0;
  double upper_fence = 0.0;
};

// Tukey fences [q1 - 1.5 iqr, q3 + 1.5 iqr] over unsorted data.
QuantileSummary SummarizeQuartiles(std::span<const double> data);

}  // namespace ofuse

#endif  // OFUSE_NUMERIC_QUANTILE_H_
