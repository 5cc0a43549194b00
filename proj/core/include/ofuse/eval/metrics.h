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

#ifndef OFUSE_EVAL_METRICS_H_
#define OFUSE_EVAL_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace ofuse {

// One-vs-rest counts for a single class.
struct ClassCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

struct ConfusionCounts {
  std::uint64_t total = 0;
  std::vector<ClassCounts> per_class;

  std::size_t classes() const { return per_class.size(); }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct ClassMetrics {
  double specificity = 0.0;
  double sensitivity = 0.0;
  double f1 = 0.0;
};

// Macro values are unweighted means over all classes. Any 0/0 ratio is 0.
struct MetricsReport {
  double accuracy = 0.0;
  std::vector<ClassMetrics> per_class;
  double macro_specificity = 0.0;
  double macro_sensitivity = 0.0;
  double macro_f1 = 0.0;
};

// Labels must lie in [0, n_classes) (kDomain); lengths must match (kShape).
ConfusionCounts CountConfusion(std::span<const int> truth, std::span<const int> predicted,
                               std::size_t n_classes);

MetricsReport ReportMetrics(const ConfusionCounts& counts);

// JSON object with accuracy, the macro triple, the averaging scheme and a
// per-class array. class_names, when non-empty, must have one entry per class.
void WriteMetricsJson(std::ostream& out, const MetricsReport& report,
                      std::span<const std::string> class_names = {});

}  // namespace ofuse

#endif  // OFUSE_EVAL_METRICS_H_
