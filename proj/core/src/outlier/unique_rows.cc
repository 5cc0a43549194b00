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

#include "unique_rows.h"

#include <algorithm>
#include <numeric>

namespace ofuse::internal {

UniqueRows GroupUniqueRows(const FeatureMatrix& x) {
  const std::size_t n = x.samples();
  const std::size_t d = x.features();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto row_less = [&](std::size_t a, std::size_t b) {
    const auto ra = x.sample(a);
    const auto rb = x.sample(b);
    if (std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end())) return true;
    if (std::lexicographical_compare(rb.begin(), rb.end(), ra.begin(), ra.end())) return false;
    return a < b;
  };
  std::sort(order.begin(), order.end(), row_less);

  UniqueRows out;
  out.group_of.assign(n, 0);
  std::vector<double> values;
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t idx = order[pos];
    const auto row = x.sample(idx);
    const bool fresh =
        pos == 0 || !std::equal(row.begin(), row.end(), x.sample(order[pos - 1]).begin());
    if (fresh) {
      values.insert(values.end(), row.begin(), row.end());
      out.counts.push_back(0);
    }
    out.counts.back() += 1;
    out.group_of[idx] = out.counts.size() - 1;
  }
  out.points = Matrix(out.counts.size(), d, std::move(values));
  return out;
}

}  // namespace ofuse::internal
