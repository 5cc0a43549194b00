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

#ifndef OFUSE_METADATA_LABEL_H_
#define OFUSE_METADATA_LABEL_H_

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace ofuse {

// The fourteen retained classes come first, in reporting order; Pneumonia only
// exists before cleaning.
enum class DiseaseLabel {
  kAtelectasis,
  kCardiomegaly,
  kEffusion,
  kInfiltration,
  kMass,
  kNodule,
  kPneumothorax,
  kConsolidation,
  kEdema,
  kEmphysema,
  kFibrosis,
  kPleuralThickening,
  kHernia,
  kNoFinding,
  kPneumonia,
};

inline constexpr std::size_t kRetainedLabelCount = 14;

// Retained labels in enumeration order.
std::array<DiseaseLabel, kRetainedLabelCount> RetainedLabels();

// Spelling used by the NIH metadata ("No Finding", "Pleural_Thickening").
std::string_view LabelName(DiseaseLabel label);

// Inverse of LabelName; nullopt for anything else.
std::optional<DiseaseLabel> ParseLabel(std::string_view name);

inline std::size_t LabelIndex(DiseaseLabel label) { return static_cast<std::size_t>(label); }

}  // namespace ofuse

#endif  // OFUSE_METADATA_LABEL_H_
