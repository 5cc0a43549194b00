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

#ifndef OFUSE_TOOLS_KERNEL_CHECKS_H_
#define OFUSE_TOOLS_KERNEL_CHECKS_H_

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace ofuse::cli {

struct KernelCheck {
  std::string name;
  std::size_t instances = 0;
  double max_error = 0.0;
  double tolerance = 0.0;

  bool passed() const { return max_error <= tolerance; }
};

// Gradient checks against central differences plus closed-form invariants,
// each on randomly drawn instances from `seed`.
std::vector<KernelCheck> RunKernelChecks(std::uint64_t seed);

// CSV: check,instances,max_error,tolerance,status.
void WriteKernelReport(std::ostream& out, std::span<const KernelCheck> checks);

}  // namespace ofuse::cli

#endif  // OFUSE_TOOLS_KERNEL_CHECKS_H_
