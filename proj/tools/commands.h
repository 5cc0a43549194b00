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

#ifndef OFUSE_TOOLS_COMMANDS_H_
#define OFUSE_TOOLS_COMMANDS_H_

#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ofuse/error.h"
#include "run_config.h"

namespace ofuse::cli {

struct CommandInfo {
  std::string_view name;
  std::string_view description;
};

inline constexpr CommandInfo kCommands[] = {
    {"clean", "parse, label-clean and outlier-filter metadata"},
    {"outliers", "per-record detector votes and fused verdicts"},
    {"counts", "per-label counts of a clean CSV"},
    {"check-kernels", "gradient and invariant self-checks"},
    {"train-toy", "train the toy attention/DGMP model on synthetic textures"},
    {"eval", "metrics JSON from a predictions CSV"},
};

// Process exit statuses.
enum ExitStatus : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitData = 2,
  kExitNumeric = 3,
};

ExitStatus ExitStatusFor(ErrorKind kind);

// Artifacts held in memory until the command succeeds, then written in
// insertion order followed by the manifest.
class ArtifactSet {
 public:
  void Add(std::string name, std::string bytes);
  void Write(const RunConfig& cfg) const;

  // Manifest text: command, config hash, seed, effective settings, input
  // checksum and one checksum line per artifact.
  std::string Manifest(const RunConfig& cfg) const;

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

struct CommandResult {
  ArtifactSet artifacts;
  std::string summary;  // also stored as summary.txt
  ExitStatus status = kExitOk;
};

// Runs one command; library errors propagate as ofuse::Error.
CommandResult RunCommand(const RunConfig& cfg);

}  // namespace ofuse::cli

#endif  // OFUSE_TOOLS_COMMANDS_H_
