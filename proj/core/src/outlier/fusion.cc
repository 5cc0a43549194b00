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

#include "ofuse/outlier/fusion.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ofuse/error.h"
#include "ofuse/numeric/parallel.h"
#include "ofuse/outlier/iqr.h"
#include "ofuse/outlier/isolation_forest.h"
#include "ofuse/outlier/lof.h"
#include "ofuse/outlier/mcd.h"
#include "ofuse/outlier/ocsvm.h"

namespace ofuse {

FlagVector ThresholdByContamination(std::span<const double> scores, double contamination) {
  Require(contamination >= 0.0 && contamination <= 0.5, ErrorKind::kDomain,
          "contamination must lie in [0, 0.5]");
  const std::size_t n = scores.size();
  const auto quota = static_cast<std::size_t>(
      std::floor(contamination * static_cast<double>(n)));
  FlagVector flags(n, false);
  if (quota == 0) return flags;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + static_cast<long>(quota), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return a < b;
                    });
  for (std::size_t i = 0; i < quota; ++i) flags[order[i]] = true;
  return flags;
}

std::vector<OutlierVerdict> FuseVotes(const std::array<FlagVector, kDetectorCount>& votes) {
  const std::size_t n = votes[0].size();
  for (const auto& v : votes) {
    Require(v.size() == n, ErrorKind::kShape, "vote vectors differ in length");
  }
  std::vector<OutlierVerdict> verdicts(n);
  for (std::size_t i = 0; i < n; ++i) {
    OutlierVerdict& out = verdicts[i];
    out.sample_id = i;
    for (std::size_t k = 0; k < kDetectorCount; ++k) {
      out.votes[k] = votes[k][i];
      out.vote_count += votes[k][i] ? 1 : 0;
    }
    out.is_outlier = out.vote_count >= kFusionQuorum;
  }
  return verdicts;
}

std::size_t FusionResult::flagged(DetectorKind kind) const {
  const auto& v = votes[static_cast<std::size_t>(kind)];
  return static_cast<std::size_t>(std::count(v.begin(), v.end(), true));
}

std::size_t FusionResult::outliers() const {
  return static_cast<std::size_t>(std::count_if(
      verdicts.begin(), verdicts.end(), [](const OutlierVerdict& v) { return v.is_outlier; }));
}

FusionResult RunFusion(const FeatureMatrix& x, const DetectorConfig& cfg) {
  cfg.Validate();
  FusionResult result;
  if (cfg.iforest_subsample > x.samples()) {
    result.warnings.push_back("iforest_subsample " + std::to_string(cfg.iforest_subsample) +
                              " exceeds n = " + std::to_string(x.samples()) +
                              "; clamped to n");
  }
  ParallelFor(kDetectorCount, [&](std::size_t k) {
    switch (kAllDetectors[k]) {
      case DetectorKind::kIqr:
        result.scores[k] = IqrScores(x);
        result.votes[k] = IqrDetect(x);
        return;
      case DetectorKind::kLof:
        result.scores[k] = LofScores(x, cfg.lof_k);
        break;
      case DetectorKind::kOcsvm:
        result.scores[k] = OcsvmScores(x, cfg);
        break;
      case DetectorKind::kIsolationForest:
        result.scores[k] = IsolationForestScores(x, cfg);
        break;
      case DetectorKind::kEllipticEnvelope:
        result.scores[k] = McdScores(x, cfg);
        break;
    }
    result.votes[k] = ThresholdByContamination(result.scores[k], cfg.contamination);
  });
  result.verdicts = FuseVotes(result.votes);
  return result;
}

void WriteVerdictCsv(std::ostream& out, std::span<const OutlierVerdict> verdicts,
                     std::optional<std::span<const std::string>> sample_ids) {
  Require(!sample_ids || sample_ids->size() == verdicts.size(), ErrorKind::kShape,
          "sample id count does not match verdict count");
  out << "sample_id";
  for (DetectorKind kind : kAllDetectors) out << ",vote_" << DetectorName(kind);
  out << ",vote_count,is_outlier\n";
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    const OutlierVerdict& v = verdicts[i];
    if (sample_ids) {
      out << (*sample_ids)[i];
    } else {
      out << v.sample_id;
    }
    for (bool vote : v.votes) out << ',' << (vote ? 1 : 0);
    out << ',' << v.vote_count << ',' << (v.is_outlier ? 1 : 0) << '\n';
  }
}

}  // namespace ofuse
