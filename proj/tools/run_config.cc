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

#include "run_config.h"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ofuse/error.h"

namespace ofuse::cli {
namespace {

constexpr std::array<ConfigKey, 25> kKeys = {{
    {"input", "", "input file"},
    {"output", "out", "artifact directory"},
    {"seed", "0", "random seed"},
    {"contamination", "0.108", "expected outlier fraction"},
    {"lof_k", "20", "LOF neighbour count"},
    {"iforest_trees", "100", "isolation forest size"},
    {"iforest_subsample", "256", "isolation forest subsample"},
    {"ocsvm_nu", "auto", "one-class SVM nu (auto = contamination)"},
    {"ocsvm_gamma", "auto", "RBF width (auto = 1/(d var))"},
    {"mcd_h", "auto", "MCD support size"},
    {"mcd_restarts", "50", "FastMCD random starts"},
    {"lambda", "1", "DGMP regularizer"},
    {"pooling", "dgmp", "dgmp or max"},
    {"attention", "traditional", "none, self or traditional"},
    {"heads", "channel,spatial,coordinate", "attention heads"},
    {"reduction", "16", "channel reduction ratio"},
    {"spatial_kernel", "7", "spatial attention kernel size"},
    {"gamma", "2", "focal loss focusing parameter"},
    {"learning_rate", "1e-4", "Adam step size"},
    {"batch_size", "64", "mini-batch size"},
    {"epochs", "30", "training epochs"},
    {"test_fraction", "0.2", "hold-out fraction"},
    {"samples", "800", "synthetic image count"},
    {"image_size", "16", "synthetic image side"},
    {"classes", "auto", "class count for eval (auto = max label + 1)"},
}};

bool IsKnown(std::string_view key) {
  for (const ConfigKey& k : kKeys)
    if (key == k.name) return true;
  return false;
}

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

[[noreturn]] void BadValue(const std::string& key, const std::string& value, const char* want) {
  Fail(ErrorKind::kConfig, key + ": '" + value + "' is not " + want);
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& value, const char* want) {
  T out{};
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || value.empty()) BadValue(key, value, want);
  return out;
}

double Real(const Settings& s, const std::string& key) {
  return ParseNumber<double>(key, s.at(key), "a number");
}

std::size_t Count(const Settings& s, const std::string& key) {
  return ParseNumber<std::size_t>(key, s.at(key), "a non-negative integer");
}

std::optional<double> AutoReal(const Settings& s, const std::string& key) {
  if (s.at(key) == "auto") return std::nullopt;
  return Real(s, key);
}

std::optional<std::size_t> AutoCount(const Settings& s, const std::string& key) {
  if (s.at(key) == "auto") return std::nullopt;
  return Count(s, key);
}

std::vector<AttentionHead> ParseHeads(const std::string& value) {
  std::vector<AttentionHead> heads;
  std::istringstream in(value);
  for (std::string item; std::getline(in, item, ',');) {
    const std::string_view name = Trim(item);
    if (name == "channel") {
      heads.push_back(AttentionHead::kChannel);
    } else if (name == "spatial") {
      heads.push_back(AttentionHead::kSpatial);
    } else if (name == "coordinate") {
      heads.push_back(AttentionHead::kCoordinate);
    } else {
      BadValue("heads", value, "a list of channel, spatial, coordinate");
    }
  }
  return heads;
}

}  // namespace

std::span<const ConfigKey> ConfigKeys() { return kKeys; }

Settings ParseConfigText(std::string_view text, const std::string& origin) {
  Settings settings;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    const std::string_view line = Trim(text.substr(0, eol));
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const std::string where = origin + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    Require(eq != std::string_view::npos, ErrorKind::kConfig, where + ": expected key = value");
    const std::string key(Trim(line.substr(0, eq)));
    Require(IsKnown(key), ErrorKind::kConfig, where + ": unknown key '" + key + "'");
    Require(!settings.contains(key), ErrorKind::kConfig, where + ": '" + key + "' set twice");
    settings[key] = std::string(Trim(line.substr(eq + 1)));
  }
  return settings;
}

Settings ReadConfigFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  Require(in.good(), ErrorKind::kConfig, "cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return ParseConfigText(text.str(), path.string());
}

RunConfig ResolveConfig(const std::string& command, const Settings& settings) {
  Settings s;
  for (const ConfigKey& k : kKeys) s[k.name] = k.default_value;
  for (const auto& [key, value] : settings) {
    Require(IsKnown(key), ErrorKind::kConfig, "unknown key '" + key + "'");
    s[key] = value;
  }

  RunConfig cfg;
  cfg.command = command;
  cfg.input = s.at("input");
  cfg.output = s.at("output");
  Require(!cfg.output.empty(), ErrorKind::kConfig, "output directory must not be empty");
  cfg.seed = ParseNumber<std::uint64_t>("seed", s.at("seed"), "a non-negative integer");

  DetectorConfig& d = cfg.detector;
  d.contamination = Real(s, "contamination");
  d.lof_k = Count(s, "lof_k");
  d.iforest_trees = Count(s, "iforest_trees");
  d.iforest_subsample = Count(s, "iforest_subsample");
  d.ocsvm_nu = AutoReal(s, "ocsvm_nu");
  d.ocsvm_gamma = AutoReal(s, "ocsvm_gamma");
  d.mcd_h = AutoCount(s, "mcd_h");
  d.mcd_restarts = Count(s, "mcd_restarts");
  d.seed = cfg.seed;
  d.Validate();

  ToyModelConfig& m = cfg.model;
  m.image_size = Count(s, "image_size");
  m.lambda = Real(s, "lambda");
  const std::string& pooling = s.at("pooling");
  if (pooling == "dgmp") {
    m.pooling = PoolingKind::kDgmp;
  } else if (pooling == "max") {
    m.pooling = PoolingKind::kGlobalMax;
  } else {
    BadValue("pooling", pooling, "dgmp or max");
  }
  const std::string& attention = s.at("attention");
  if (attention != "none") {
    AttentionConfig a;
    if (attention == "self") {
      a.placement = AttentionPlacement::kSelf;
    } else if (attention == "traditional") {
      a.placement = AttentionPlacement::kTraditional;
    } else {
      BadValue("attention", attention, "none, self or traditional");
    }
    a.heads = ParseHeads(s.at("heads"));
    a.reduction = Count(s, "reduction");
    a.spatial_kernel = Count(s, "spatial_kernel");
    m.attention = a;
  }
  m.Validate();

  TrainConfig& t = cfg.train;
  t.epochs = Count(s, "epochs");
  t.batch_size = Count(s, "batch_size");
  t.test_fraction = Real(s, "test_fraction");
  t.adam.learning_rate = Real(s, "learning_rate");
  t.focal.gamma = Real(s, "gamma");
  t.seed = cfg.seed;
  t.Validate();

  cfg.samples = Count(s, "samples");
  cfg.classes = AutoCount(s, "classes");
  Require(!cfg.classes || *cfg.classes >= 1, ErrorKind::kConfig, "classes must be at least 1");

  s.erase("output");
  cfg.effective = std::move(s);
  return cfg;
}

std::uint64_t RunConfig::Hash() const {
  std::string text = "command=" + command + "\n";
  for (const auto& [key, value] : effective) text += key + "=" + value + "\n";
  return Fnv1a64(text);
}

std::uint64_t Fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string HashString(std::uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return std::string("fnv1a64:") + buf;
}

}  // namespace ofuse::cli
