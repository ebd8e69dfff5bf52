/*
Copyright 2026 The catcache Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "catcache/errors.h"
#include "config.h"
#include "runners.h"

namespace {

using catcache::cli::ExperimentConfig;

int Dispatch(const std::string& command, const ExperimentConfig& config,
             std::ostream& csv, std::ostream& log) {
  if (command == "optimize") return catcache::cli::RunOptimize(config, csv, log);
  if (command == "sweep") return catcache::cli::RunSweep(config, csv, log);
  if (command == "simulate") return catcache::cli::RunSimulate(config, csv, log);
  return catcache::cli::RunValidate(config, csv, log);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Per-category cache allocation for session-correlated requests"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::optional<int> workers;
  std::optional<catcache::Objective> objective;
  std::optional<catcache::ObjectiveMode> mode;

  app.add_option("--config", config_path, "Experiment INI file")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Simulation seed (overrides the config)");
  app.add_option("--out", out_path, "CSV output path, '-' for stdout");
  app.add_option("--workers", workers, "Sweep worker threads")
      ->check(CLI::PositiveNumber);
  const std::map<std::string, catcache::Objective> objectives{
      {"hit", catcache::Objective::kHitRate},
      {"length", catcache::Objective::kExpectedLength}};
  app.add_option("--objective", objective, "Optimization objective")
      ->transform(CLI::CheckedTransformer(objectives, CLI::ignore_case))
      ->option_text("{hit,length}");
  const std::map<std::string, catcache::ObjectiveMode> modes{
      {"paper", catcache::ObjectiveMode::kPaperVerbatim},
      {"consistent", catcache::ObjectiveMode::kGenerativeConsistent}};
  app.add_option("--mode", mode, "Hit-probability series")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case))
      ->option_text("{paper,consistent}");

  app.add_subcommand("optimize", "Optimize one configuration");
  app.add_subcommand("sweep", "Optimize every point of the [sweep] axis");
  app.add_subcommand("simulate", "Optimize, then simulate sessions");
  app.add_subcommand("validate",
                     "Compare closed forms with simulation (3 sigma)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : catcache::cli::kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    ExperimentConfig config = config_path.empty()
                                  ? catcache::cli::DefaultConfig()
                                  : catcache::cli::LoadConfig(config_path);
    if (seed) config.simulation.seed = *seed;
    if (workers) config.workers = *workers;
    if (objective) config.optimizer.objective = *objective;
    if (mode) config.optimizer.mode = *mode;
    if (!out_path.empty()) config.output_path = out_path;

    // Rows are buffered so a failed run leaves no partial table behind.
    std::ostringstream csv;
    const bool to_stdout = config.output_path == "-";
    std::ostream& log = to_stdout ? std::cerr : std::cout;
    const int status = Dispatch(command, config, csv, log);
    if (to_stdout) {
      std::cout << csv.str();
    } else {
      std::ofstream out(config.output_path, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot write '" << config.output_path << "'\n";
        return catcache::cli::kExitOther;
      }
      out << csv.str();
    }
    return status;
  } catch (const catcache::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return catcache::cli::ExitCodeFor(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return catcache::cli::kExitOther;
  }
}
