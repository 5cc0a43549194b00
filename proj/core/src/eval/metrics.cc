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

#include "ofuse/eval/metrics.h"

#include <string>

#include "json.hpp"
#include "ofuse/error.h"

namespace ofuse {
namespace {

double Ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

ConfusionCounts CountConfusion(std::span<const int> truth, std::span<const int> predicted,
                               std::size_t n_classes) {
  Require(truth.size() == predicted.size(), ErrorKind::kShape,
          "label vectors differ in length: " + std::to_string(truth.size()) + " vs " +
              std::to_string(predicted.size()));
  Require(n_classes >= 1, ErrorKind::kDomain, "n_classes must be positive");
  const auto in_range = [&](int label) {
    return label >= 0 && static_cast<std::size_t>(label) < n_classes;
  };

  std::vector<std::uint64_t> true_total(n_classes, 0), pred_total(n_classes, 0),
      hits(n_classes, 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    Require(in_range(truth[i]) && in_range(predicted[i]), ErrorKind::kDomain,
            "label out of range at index " + std::to_string(i));
    ++true_total[truth[i]];
    ++pred_total[predicted[i]];
    if (truth[i] == predicted[i]) ++hits[truth[i]];
  }

  ConfusionCounts counts;
  counts.total = truth.size();
  counts.per_class.resize(n_classes);
  for (std::size_t c = 0; c < n_classes; ++c) {
    ClassCounts& cc = counts.per_class[c];
    cc.tp = hits[c];
    cc.fp = pred_total[c] - hits[c];
    cc.fn = true_total[c] - hits[c];
    cc.tn = counts.total - cc.tp - cc.fp - cc.fn;
  }
  return counts;
}

MetricsReport ReportMetrics(const ConfusionCounts& counts) {
  MetricsReport report;
  std::uint64_t correct = 0;
  for (const ClassCounts& cc : counts.per_class) {
    correct += cc.tp;
    ClassMetrics m;
    m.specificity = Ratio(double(cc.tn), double(cc.tn + cc.fp));
    m.sensitivity = Ratio(double(cc.tp), double(cc.tp + cc.fn));
    m.f1 = Ratio(2.0 * double(cc.tp), double(2 * cc.tp + cc.fp + cc.fn));
    report.macro_specificity += m.specificity;
    report.macro_sensitivity += m.sensitivity;
    report.macro_f1 += m.f1;
    report.per_class.push_back(m);
  }
  const double k = double(counts.classes());
  report.macro_specificity = Ratio(report.macro_specificity, k);
  report.macro_sensitivity = Ratio(report.macro_sensitivity, k);
  report.macro_f1 = Ratio(report.macro_f1, k);
  report.accuracy = Ratio(double(correct), double(counts.total));
  return report;
}

void WriteMetricsJson(std::ostream& out, const MetricsReport& report,
                      std::span<const std::string> class_names) {
  Require(class_names.empty() || class_names.size() == report.per_class.size(),
          ErrorKind::kShape, "class name count does not match the report");
  nlohmann::ordered_json doc;
  doc["averaging"] = "macro";
  doc["accuracy"] = report.accuracy;
  doc["macro_f1"] = report.macro_f1;
  doc["macro_specificity"] = report.macro_specificity;
  doc["macro_sensitivity"] = report.macro_sensitivity;
  doc["per_class"] = nlohmann::ordered_json::array();
  for (std::size_t c = 0; c < report.per_class.size(); ++c) {
    nlohmann::ordered_json row;
    row["class"] = class_names.empty() ? nlohmann::ordered_json(c)
                                       : nlohmann::ordered_json(class_names[c]);
    row["f1"] = report.per_class[c].f1;
    row["specificity"] = report.per_class[c].specificity;
    row["sensitivity"] = report.per_class[c].sensitivity;
    doc["per_class"].push_back(std::move(row));
  }
  out << doc.dump(2) << '\n';
}

}  // namespace ofuse
