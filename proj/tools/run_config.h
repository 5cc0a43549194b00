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

#ifndef OFUSE_TOOLS_RUN_CONFIG_H_
#define OFUSE_TOOLS_RUN_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ofuse/model/toy.h"
#include "ofuse/outlier/detector.h"

namespace ofuse::cli {

// Raw key=value settings, keyed by config name (underscored).
using Settings = std::map<std::string, std::string>;

struct ConfigKey {
  const char* name;
  const char* default_value;
  const char* help;
};

// Every accepted key, in a fixed order.
std::span<const ConfigKey> ConfigKeys();

// Parses "key = value" lines. Blank lines and lines starting with '#' are
// skipped. Unknown keys, repeated keys and malformed lines are kConfig.
Settings ParseConfigText(std::string_view text, const std::string& origin);
Settings ReadConfigFile(const std::filesystem::path& path);

struct RunConfig {
  std::string command;
  std::filesystem::path input;
  std::filesystem::path output;
  std::uint64_t seed = 0;
  DetectorConfig detector;
  ToyModelConfig model;
  TrainConfig train;
  std::size_t samples = 0;
  std::optional<std::size_t> classes;
  // Effective settings with defaults filled in, output directory excluded.
  Settings effective;

  // FNV-1a 64 over the command and the effective settings.
  std::uint64_t Hash() const;
};

// Fills defaults, parses and validates every value. Throws kConfig.
RunConfig ResolveConfig(const std::string& command, const Settings& settings);

std::uint64_t Fnv1a64(std::string_view bytes);
// "fnv1a64:" followed by 16 lowercase hex digits.
std::string HashString(std::uint64_t hash);

}  // namespace ofuse::cli

#endif  // OFUSE_TOOLS_RUN_CONFIG_H_
