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

// Experiment configuration: a strict INI schema on top of the core models.

#ifndef CATCACHE_TOOLS_CONFIG_H_
#define CATCACHE_TOOLS_CONFIG_H_

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "catcache/allocator.h"
#include "catcache/simulator.h"

namespace catcache::cli {

// Parameters a sweep may vary.
enum class SweepParameter {
  kLambda,
  kRadius,
  kEpsilon,
  kCapacity,
  kGamma,
  kGammaOut,
  kGammaIn,
  kPlateau,
};

std::string SweepParameterName(SweepParameter parameter);

struct Sweep {
  SweepParameter parameter = SweepParameter::kLambda;
  std::vector<double> values;
};

struct ExperimentConfig {
  std::string id = "experiment";
  std::string preset = "A";  // A, B, C or custom
  CacheProblem problem;
  AllocatorConfig optimizer;
  std::optional<Sweep> sweep;
  SimConfig simulation;
  bool simulate_sweep = false;  // also simulate every optimize/sweep row
  bool outside_set = false;     // simulation.outside_popularity given
  std::string trace_path;
  std::string output_path = "-";
  bool wall_time = false;
  int workers = 1;
};

// Section defaults: Case A, gamma 1, gamma_out 5, gamma_in 2.4, c_in 69,
// M 30, epsilon 0.1, lambda 0.02, d 10.
ExperimentConfig DefaultConfig();

// Throws Error(kInvalidParameter) on syntax errors, unknown sections or keys,
// type mismatches and values the core rejects.
ExperimentConfig ParseConfig(std::istream& in);
ExperimentConfig LoadConfig(const std::string& path);

// Applies one sweep value to a copy of `base`.
CacheProblem ApplySweepValue(const CacheProblem& base, SweepParameter parameter,
                             double value);

}  // namespace catcache::cli

#endif  // CATCACHE_TOOLS_CONFIG_H_
