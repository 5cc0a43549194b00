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

#ifndef OFUSE_OUTLIER_FUSION_H_
#define OFUSE_OUTLIER_FUSION_H_

#include <array>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ofuse/numeric/matrix.h"
#include "ofuse/outlier/detector.h"

namespace ofuse {

// Votes needed (out of five) to call a sample an outlier.
inline constexpr std::size_t kFusionQuorum = 3;

struct OutlierVerdict {
  std::size_t sample_id = 0;
  std::array<bool, kDetectorCount> votes{};  // indexed by DetectorKind
  std::size_t vote_count = 0;
  bool is_outlier = false;

  bool vote(DetectorKind kind) const { return votes[static_cast<std::size_t>(kind)]; }
};

// Flags exactly floor(contamination * n) highest scores; at the cutoff the
// lower sample index wins. contamination must lie in [0, 0.5] (kDomain).
FlagVector ThresholdByContamination(std::span<const double> scores, double contamination);

// One verdict per sample, in input order. All five vectors must have equal
// length (kShape).
std::vector<OutlierVerdict> FuseVotes(const std::array<FlagVector, kDetectorCount>& votes);

struct FusionResult {
  std::array<ScoreVector, kDetectorCount> scores;
  std::array<FlagVector, kDetectorCount> votes;
  std::vector<OutlierVerdict> verdicts;
  std::vector<std::string> warnings;

  std::size_t flagged(DetectorKind kind) const;
  std::size_t outliers() const;
};

// Runs all five detectors (concurrently when threads allow) and fuses them.
// IQR votes by its fences; the other four threshold their scores at
// cfg.contamination.
FusionResult RunFusion(const FeatureMatrix& x, const DetectorConfig& cfg);

// CSV: sample_id,vote_iqr,vote_lof,vote_ocsvm,vote_iforest,vote_elliptic,
// vote_count,is_outlier. sample_ids, when given, replace the numeric index.
void WriteVerdictCsv(std::ostream& out, std::span<const OutlierVerdict> verdicts,
                     std::optional<std::span<const std::string>> sample_ids = std::nullopt);

}  // namespace ofuse

#endif  // OFUSE_OUTLIER_FUSION_H_
