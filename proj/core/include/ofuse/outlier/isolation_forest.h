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

#ifndef OFUSE_OUTLIER_ISOLATION_FOREST_H_
#define OFUSE_OUTLIER_ISOLATION_FOREST_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ofuse/numeric/matrix.h"
#include "ofuse/outlier/detector.h"

namespace ofuse {

// Average unsuccessful-search path length of a binary search tree over m
// items: 0 for m <= 1, 1 for m = 2, otherwise 2 H(m-1) - 2 (m-1) / m with
// H(i) ~ ln(i) + Euler-Mascheroni.
double AveragePathLength(std::size_t m);

// Anomaly score 2^(-mean_path / c(subsample)).
double IsolationScore(double mean_path_length, std::size_t subsample);

class IsolationForest {
 public:
  // Grows cfg.iforest_trees trees on random subsamples without replacement.
  // A subsample larger than n is clamped to n (see subsample_clamped()).
  static IsolationForest Fit(const FeatureMatrix& x, const DetectorConfig& cfg);

  // Expected path length of one point over all trees.
  double MeanPathLength(std::span<const double> point) const;
  double Score(std::span<const double> point) const;
  ScoreVector Score(const FeatureMatrix& x) const;

  std::size_t subsample() const { return subsample_; }
  std::size_t height_limit() const { return height_limit_; }
  std::size_t tree_count() const { return trees_.size(); }
  bool subsample_clamped() const { return subsample_clamped_; }

 private:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double split = 0.0;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    std::size_t size = 0;  // samples reaching a leaf
  };
  using Tree = std::vector<Node>;

  double PathLength(const Tree& tree, std::span<const double> point) const;

  std::vector<Tree> trees_;
  std::size_t subsample_ = 0;
  std::size_t height_limit_ = 0;
  bool subsample_clamped_ = false;
};

ScoreVector IsolationForestScores(const FeatureMatrix& x, const DetectorConfig& cfg);

}  // namespace ofuse

#endif  // OFUSE_OUTLIER_ISOLATION_FOREST_H_
