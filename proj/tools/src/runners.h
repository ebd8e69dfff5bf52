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

// Subcommand runners. Each writes a CSV table and returns an exit status.

#ifndef CATCACHE_TOOLS_RUNNERS_H_
#define CATCACHE_TOOLS_RUNNERS_H_

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "catcache/allocator.h"
#include "catcache/errors.h"
#include "catcache/simulator.h"
#include "config.h"

namespace catcache::cli {

enum ExitCode {
  kExitOk = 0,
  kExitOther = 1,
  kExitConfig = 2,
  kExitInfeasible = 3,
  kExitValidation = 4,
};

int ExitCodeFor(const Error& error);

// One optimized configuration, optionally simulated.
struct PointResult {
  CacheProblem problem;
  std::optional<double> sweep_value;
  AllocationResult proposed;
  double hit_paper = 0.0;
  double hit_consistent = 0.0;
  double expected_length = 0.0;
  BaselineResult baseline;
  std::optional<SimReport> simulation;
  double wall_seconds = 0.0;
};

PointResult EvaluatePoint(const ExperimentConfig& config,
                          const CacheProblem& problem, bool simulate);

// Evaluates every sweep point (or the single base point) on `workers`
// threads. Results come back in sweep order.
std::vector<PointResult> EvaluatePoints(const ExperimentConfig& config,
                                        bool simulate);

// %.15g; the shortest form that survives a round trip at 15 digits.
std::string FormatNumber(double value);

void WriteResultHeader(std::ostream& out, const ExperimentConfig& config);
void WriteResultRow(std::ostream& out, const ExperimentConfig& config,
                    int index,
                    const PointResult& point);

int RunOptimize(const ExperimentConfig& config, std::ostream& csv,
                std::ostream& log);
int RunSweep(const ExperimentConfig& config, std::ostream& csv,
             std::ostream& log);
int RunSimulate(const ExperimentConfig& config, std::ostream& csv,
                std::ostream& log);
int RunValidate(const ExperimentConfig& config, std::ostream& csv,
                std::ostream& log);

}  // namespace catcache::cli

#endif  // CATCACHE_TOOLS_RUNNERS_H_
