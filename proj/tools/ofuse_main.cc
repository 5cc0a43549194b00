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

// ofuse: command-line front end for the outlier fusion library.

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "commands.h"
#include "ofuse/error.h"
#include "run_config.h"

namespace {

std::string FlagName(const char* key) {
  std::string flag = "--";
  for (const char* c = key; *c; ++c) flag += *c == '_' ? '-' : *c;
  return flag;
}

int Run(int argc, char** argv) {
  using ofuse::cli::kExitConfig;

  CLI::App app("Outlier fusion, metadata cleaning and attention/DGMP kernels", "ofuse");
  app.require_subcommand(1);
  app.set_version_flag("--version", "ofuse 0.1.0");

  std::string config_path;
  std::map<std::string, std::string> flag_values;
  std::map<std::string, std::vector<CLI::Option*>> flag_options;
  for (const ofuse::cli::CommandInfo& command : ofuse::cli::kCommands) {
    CLI::App* sub =
        app.add_subcommand(std::string(command.name), std::string(command.description));
    sub->add_option("--config", config_path, "key = value config file");
    for (const ofuse::cli::ConfigKey& key : ofuse::cli::ConfigKeys()) {
      flag_options[key.name].push_back(
          sub->add_option(FlagName(key.name), flag_values[key.name], key.help));
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  const CLI::App* sub = app.get_subcommands().front();
  try {
    ofuse::cli::Settings settings;
    if (!config_path.empty()) settings = ofuse::cli::ReadConfigFile(config_path);
    for (const auto& [key, options] : flag_options) {
      for (const CLI::Option* opt : options)
        if (opt->count() > 0) settings[key] = flag_values[key];
    }
    const ofuse::cli::RunConfig cfg = ofuse::cli::ResolveConfig(sub->get_name(), settings);
    const ofuse::cli::CommandResult result = ofuse::cli::RunCommand(cfg);
    result.artifacts.Write(cfg);
    std::cout << result.summary << std::flush;
    return result.status;
  } catch (const ofuse::Error& e) {
    std::cerr << "ofuse " << sub->get_name() << ": " << ofuse::ErrorKindName(e.kind())
              << " error: " << e.what() << '\n';
    return ofuse::cli::ExitStatusFor(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "ofuse " << sub->get_name() << ": " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) { return Run(argc, argv); }
