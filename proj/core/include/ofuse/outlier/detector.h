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

#ifndef OFUSE_OUTLIER_DETECTOR_H_
#define OFUSE_OUTLIER_DETECTOR_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace ofuse {

// The five voters of the fusion ensemble, in vote-column order.
enum class DetectorKind {
  kIqr = 0,
  kLof = 1,
  kOcsvm = 2,
  kIsolationForest = 3,
  kEllipticEnvelope = 4,
};

inline constexpr std::size_t kDetectorCount = 5;
inline constexpr std::array<DetectorKind, kDetectorCount> kAllDetectors = {
    DetectorKind::kIqr, DetectorKind::kLof, DetectorKind::kOcsvm,
    DetectorKind::kIsolationForest, DetectorKind::kEllipticEnvelope};

// Short lowercase name used in CSV columns and reports ("iqr", "lof", ...).
std::string_view DetectorName(DetectorKind kind);

// Per-sample anomaly scores, higher = more anomalous.
using ScoreVector = std::vector<double>;
using FlagVector = std::vector<bool>;

struct DetectorConfig {
  double contamination = 0.108;
  std::size_t lof_k = 20;
  std::size_t iforest_trees = 100;
  std::size_t iforest_subsample = 256;
  std::optional<double> ocsvm_nu;     // defaults to contamination
  std::optional<double> ocsvm_gamma;  // defaults to 1 / (d * var(X))
  double ocsvm_tolerance = 1e-4;
  std::size_t ocsvm_max_iterations = 10'000'000;
  std::optional<std::size_t> mcd_h;  // defaults to ceil((n + d + 1) / 2)
  std::size_t mcd_restarts = 50;
  std::size_t mcd_max_csteps = 100;
  std::uint64_t seed = 0;

  double nu() const { return ocsvm_nu.value_or(contamination); }

  // Checks the data-independent ranges; throws kConfig.
  void Validate() const;
};

// Smallest admissible MCD support, ceil((n + d + 1) / 2).
std::size_t MinimumMcdSupport(std::size_t n, std::size_t d);

}  // namespace ofuse

#endif  // OFUSE_OUTLIER_DETECTOR_H_
