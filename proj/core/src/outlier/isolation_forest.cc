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

#include "ofuse/outlier/isolation_forest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ofuse/error.h"
#include "ofuse/numeric/rng.h"

namespace ofuse {
namespace {

constexpr double kEulerGamma = 0.5772156649;
constexpr std::uint64_t kForestStream = 0x1f0'4e57;

}  // namespace

double AveragePathLength(std::size_t m) {
  if (m <= 1) return 0.0;
  if (m == 2) return 1.0;
  const double mm = static_cast<double>(m);
  const double harmonic = std::log(mm - 1.0) + kEulerGamma;
  return 2.0 * harmonic - 2.0 * (mm - 1.0) / mm;
}

double IsolationScore(double mean_path_length, std::size_t subsample) {
  return std::exp2(-mean_path_length / AveragePathLength(subsample));
}

IsolationForest IsolationForest::Fit(const FeatureMatrix& x, const DetectorConfig& cfg) {
  const std::size_t n = x.samples();
  const std::size_t d = x.features();
  Require(n >= 2, ErrorKind::kDomain, "isolation forest needs n >= 2");
  Require(cfg.iforest_trees >= 1, ErrorKind::kConfig, "iforest_trees must be positive");

  IsolationForest forest;
  forest.subsample_ = std::min(cfg.iforest_subsample, n);
  forest.subsample_clamped_ = cfg.iforest_subsample > n;
  forest.height_limit_ = static_cast<std::size_t>(
      std::ceil(std::log2(static_cast<double>(forest.subsample_))));
  forest.trees_.reserve(cfg.iforest_trees);

  const RngStream base(cfg.seed, kForestStream);
  std::vector<std::size_t> pool(n);
  std::vector<std::size_t> candidates;
  candidates.reserve(d);

  for (std::size_t t = 0; t < cfg.iforest_trees; ++t) {
    RngStream rng = base.Split(t);
    std::iota(pool.begin(), pool.end(), 0);
    // Partial Fisher-Yates: the first `subsample_` slots form the sample.
    for (std::size_t i = 0; i < forest.subsample_; ++i) {
      std::swap(pool[i], pool[i + rng.UniformIndex(n - i)]);
    }
    std::vector<std::size_t> rows(pool.begin(),
                                  pool.begin() + static_cast<long>(forest.subsample_));

    Tree tree;
    struct Pending {
      std::uint32_t node;
      std::size_t begin;
      std::size_t end;
      std::size_t depth;
    };
    tree.push_back({});
    std::vector<Pending> stack{{0, 0, rows.size(), 0}};
    while (!stack.empty()) {
      const Pending job = stack.back();
      stack.pop_back();
      const std::size_t size = job.end - job.begin;
      tree[job.node].size = size;
      if (size <= 1 || job.depth >= forest.height_limit_) continue;

      candidates.clear();
      std::vector<double> lo(d), hi(d);
      for (std::size_t f = 0; f < d; ++f) {
        lo[f] = hi[f] = x(rows[job.begin], f);
        for (std::size_t i = job.begin + 1; i < job.end; ++i) {
          lo[f] = std::min(lo[f], x(rows[i], f));
          hi[f] = std::max(hi[f], x(rows[i], f));
        }
        if (hi[f] > lo[f]) candidates.push_back(f);
      }
      if (candidates.empty()) continue;

      const std::size_t f = candidates[rng.UniformIndex(candidates.size())];
      const double split = rng.Uniform(lo[f], hi[f]);
      const auto mid = std::partition(
          rows.begin() + static_cast<long>(job.begin), rows.begin() + static_cast<long>(job.end),
          [&](std::size_t r) { return x(r, f) <= split; });
      const auto mid_index = static_cast<std::size_t>(mid - rows.begin());

      const auto left = static_cast<std::uint32_t>(tree.size());
      tree.push_back({});
      tree.push_back({});
      Node& node = tree[job.node];
      node.feature = static_cast<int>(f);
      node.split = split;
      node.left = left;
      node.right = left + 1;
      stack.push_back({left + 1, mid_index, job.end, job.depth + 1});
      stack.push_back({left, job.begin, mid_index, job.depth + 1});
    }
    forest.trees_.push_back(std::move(tree));
  }
  return forest;
}

double IsolationForest::PathLength(const Tree& tree, std::span<const double> point) const {
  std::size_t node = 0;
  double depth = 0.0;
  while (tree[node].feature >= 0) {
    const Node& n = tree[node];
    node = point[static_cast<std::size_t>(n.feature)] <= n.split ? n.left : n.right;
    depth += 1.0;
  }
  return depth + AveragePathLength(tree[node].size);
}

double IsolationForest::MeanPathLength(std::span<const double> point) const {
  double sum = 0.0;
  for (const Tree& tree : trees_) sum += PathLength(tree, point);
  return sum / static_cast<double>(trees_.size());
}

double IsolationForest::Score(std::span<const double> point) const {
  return IsolationScore(MeanPathLength(point), subsample_);
}

ScoreVector IsolationForest::Score(const FeatureMatrix& x) const {
  ScoreVector scores(x.samples());
  for (std::size_t i = 0; i < x.samples(); ++i) scores[i] = Score(x.sample(i));
  return scores;
}

ScoreVector IsolationForestScores(const FeatureMatrix& x, const DetectorConfig& cfg) {
  return IsolationForest::Fit(x, cfg).Score(x);
}

}  // namespace ofuse
