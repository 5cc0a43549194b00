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

#include "ofuse/metadata/label.h"

namespace ofuse {
namespace {

constexpr std::array<std::string_view, kRetainedLabelCount + 1> kNames = {
    "Atelectasis", "Cardiomegaly",  "Effusion", "Infiltration", "Mass",
    "Nodule",      "Pneumothorax",  "Consolidation", "Edema",   "Emphysema",
    "Fibrosis",    "Pleural_Thickening", "Hernia", "No Finding", "Pneumonia",
};

}  // namespace

std::array<DiseaseLabel, kRetainedLabelCount> RetainedLabels() {
  std::array<DiseaseLabel, kRetainedLabelCount> labels{};
  for (std::size_t i = 0; i < kRetainedLabelCount; ++i) labels[i] = DiseaseLabel(i);
  return labels;
}

std::string_view LabelName(DiseaseLabel label) { return kNames[LabelIndex(label)]; }

std::optional<DiseaseLabel> ParseLabel(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return DiseaseLabel(i);
  }
  return std::nullopt;
}

}  // namespace ofuse
