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

#ifndef OFUSE_NUMERIC_PARALLEL_H_
#define OFUSE_NUMERIC_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace ofuse {

// Worker count from OUTLIER_FUSION_THREADS (unset or 0 = hardware
// concurrency). Always >= 1.
std::size_t ConfiguredThreadCount();

// Runs body(i) for i in [0, n) over contiguous blocks, one per worker.
// Callers write only to slot i, so results do not depend on scheduling.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ofuse

#endif  // OFUSE_NUMERIC_PARALLEL_H_
