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

#ifndef OFUSE_EVAL_SPLIT_H_
#define OFUSE_EVAL_SPLIT_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ofuse {

using IndexList = std::vector<std::size_t>;

// k disjoint folds covering every index, each sorted ascending. Per class,
// fold sizes differ by at most one. Labels must be non-negative; every class
// present needs at least k members.
std::vector<IndexList> StratifiedKFold(std::span<const int> labels, std::size_t k,
                                       std::uint64_t seed);

struct HoldoutSplit {
  IndexList train;
  IndexList test;
};

// Per class, round(test_fraction * count) members go to test.
HoldoutSplit StratifiedHoldout(std::span<const int> labels, double test_fraction,
                               std::uint64_t seed);

}  // namespace ofuse

#endif  // OFUSE_EVAL_SPLIT_H_
