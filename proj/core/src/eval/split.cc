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

#include "ofuse/eval/split.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "ofuse/error.h"
#include "ofuse/numeric/rng.h"

namespace ofuse {
namespace {

// Class label -> member indices (ascending), each list shuffled by its own
// stream so adding a class does not perturb the others.
std::map<int, IndexList> ShuffledMembers(std::span<const int> labels, std::uint64_t seed) {
  std::map<int, IndexList> members;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    Require(labels[i] >= 0, ErrorKind::kDomain,
            "negative class label at index " + std::to_string(i));
    members[labels[i]].push_back(i);
  }
  const RngStream root(seed, 0x5f17);
  for (auto& [label, idx] : members) {
    RngStream rng = root.Split(static_cast<std::uint64_t>(label));
    rng.Shuffle(std::span<std::size_t>(idx));
  }
  return members;
}

}  // namespace

std::vector<IndexList> StratifiedKFold(std::span<const int> labels, std::size_t k,
                                       std::uint64_t seed) {
  Require(k >= 2, ErrorKind::kDomain, "k-fold needs k >= 2, got " + std::to_string(k));
  const auto members = ShuffledMembers(labels, seed);
  for (const auto& [label, idx] : members) {
    Require(idx.size() >= k, ErrorKind::kDomain,
            "class " + std::to_string(label) + " has " + std::to_string(idx.size()) +
                " members, fewer than k = " + std::to_string(k));
  }

  // Deal each class round-robin, continuing the fold cursor across classes
  // so total fold sizes also stay within one of each other.
  std::vector<IndexList> folds(k);
  std::size_t cursor = 0;
  for (const auto& [label, idx] : members) {
    for (std::size_t i : idx) {
      folds[cursor].push_back(i);
      cursor = (cursor + 1) % k;
    }
  }
  for (IndexList& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

HoldoutSplit StratifiedHoldout(std::span<const int> labels, double test_fraction,
                               std::uint64_t seed) {
  Require(test_fraction >= 0.0 && test_fraction <= 1.0, ErrorKind::kDomain,
          "test fraction must lie in [0, 1]");
  HoldoutSplit split;
  for (const auto& [label, idx] : ShuffledMembers(labels, seed)) {
    const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * idx.size()));
    split.test.insert(split.test.end(), idx.begin(), idx.begin() + n_test);
    split.train.insert(split.train.end(), idx.begin() + n_test, idx.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

}  // namespace ofuse
