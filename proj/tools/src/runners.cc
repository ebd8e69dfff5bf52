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

#include "runners.h"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <thread>

#include "catcache/analytics.h"

namespace catcache::cli {
namespace {

std::vector<std::optional<double>> SweepValues(const ExperimentConfig& config) {
  if (!config.sweep) return {std::nullopt};
  return {config.sweep->values.begin(), config.sweep->values.end()};
}

SimConfig SimulationFor(const ExperimentConfig& config,
                        const CacheProblem& problem) {
  SimConfig sim = config.simulation;
  sim.network = problem.network;
  return sim;
}

std::string Join(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out += (i ? " " : "") + std::to_string(values[i]);
  }
  return out;
}

void LogPoint(std::ostream& log, const ExperimentConfig& config,
              const PointResult& point) {
  log << "alpha = (" << Join(point.proposed.allocation.alpha) << ")  "
      << ObjectiveName(config.optimizer.objective) << '/'
      << ObjectiveModeName(config.optimizer.mode) << " objective = "
      << FormatNumber(point.proposed.objective_value) << '\n';
}

}  // namespace

int ExitCodeFor(const Error& error) {
  switch (error.code()) {
    case ErrorCode::kInvalidParameter:
    case ErrorCode::kUndefinedOutside:
    case ErrorCode::kEnumerationTooLarge:
      return kExitConfig;
    case ErrorCode::kInfeasible:
    case ErrorCode::kInfeasibleBudget:
    case ErrorCode::kInfeasiblePair:
      return kExitInfeasible;
    case ErrorCode::kDivergentSeries:
      return kExitOther;
  }
  return kExitOther;
}

std::string FormatNumber(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", value);
  return buf;
}

PointResult EvaluatePoint(const ExperimentConfig& config,
                          const CacheProblem& problem, bool simulate) {
  const auto start = std::chrono::steady_clock::now();
  PointResult point;
  point.problem = problem;
  point.proposed = GreedyAllocate(problem, config.optimizer);

  const HitTerms terms =
      ComputeHitTerms(point.proposed.policy, problem.library, problem.network);
  const Distribution f = CategoryPopularity(problem.library);
  const RequestModel req = MakeRequestModel(problem.library, problem.epsilon);
  point.hit_paper =
      ExpectedHitProbability(terms, f, req, ObjectiveMode::kPaperVerbatim);
  point.hit_consistent =
      ExpectedHitProbability(terms, f, req, ObjectiveMode::kGenerativeConsistent);
  point.expected_length = ExpectedLength(terms, f, req);
  point.baseline = BaselineOneShot(problem);

  if (simulate) {
    point.simulation = EstimateObjectives(
        SimulationFor(config, problem), problem.library, problem.epsilon,
        point.proposed.allocation, point.proposed.policy);
  }
  point.wall_seconds = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  return point;
}

std::vector<PointResult> EvaluatePoints(const ExperimentConfig& config,
                                        bool simulate) {
  const std::vector<std::optional<double>> values = SweepValues(config);
  std::vector<PointResult> results(values.size());
  std::vector<std::exception_ptr> errors(values.size());
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      try {
        const CacheProblem problem =
            values[i] ? ApplySweepValue(config.problem, config.sweep->parameter,
                                        *values[i])
                      : config.problem;
        results[i] = EvaluatePoint(config, problem, simulate);
        results[i].sweep_value = values[i];
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads =
      std::min<std::size_t>(static_cast<std::size_t>(config.workers), values.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

void WriteResultHeader(std::ostream& out, const ExperimentConfig& config) {
  out << "experiment,point,sweep_parameter,sweep_value,preset,categories,"
         "cache_size,epsilon,network,lambda,radius,mean_nodes,gamma,gamma_out,"
         "c_in,objective,mode";
  for (int i = 1; i <= config.problem.library.num_categories(); ++i) {
    out << ",alpha_" << i;
  }
  out << ",objective_value,hit_paper,hit_consistent,expected_length,sweeps,"
         "l1_hit_paper,l1_hit_consistent,l1_expected_length,sim_sessions,"
         "sim_seed,sim_all_hit,sim_all_hit_se,sim_mean_length,"
         "sim_mean_length_se,sim_request_hit,sim_request_hit_se";
  if (config.wall_time) out << ",wall_time_s";
  out << '\n';
}

void WriteResultRow(std::ostream& out, const ExperimentConfig& config,
                    int index, const PointResult& point) {
  const CacheProblem& p = point.problem;
  const bool poisson = p.network.kind() == NetworkKind::kPoissonDisk;
  out << config.id << ',' << index << ','
      << (point.sweep_value ? SweepParameterName(config.sweep->parameter) : "")
      << ',' << (point.sweep_value ? FormatNumber(*point.sweep_value) : "")
      << ',' << config.preset << ',' << p.library.num_categories() << ','
      << p.capacity << ',' << FormatNumber(p.epsilon) << ','
      << (poisson ? "poisson" : "pmf") << ','
      << (poisson ? FormatNumber(p.network.intensity()) : "") << ','
      << (poisson ? FormatNumber(p.network.radius()) : "") << ','
      << FormatNumber(p.network.mean_nodes()) << ','
      << FormatNumber(p.library.gamma) << ','
      << FormatNumber(p.library.gamma_out) << ','
      << FormatNumber(p.library.plateau) << ','
      << ObjectiveName(config.optimizer.objective) << ','
      << ObjectiveModeName(config.optimizer.mode);
  for (int a : point.proposed.allocation.alpha) out << ',' << a;
  out << ',' << FormatNumber(point.proposed.objective_value) << ','
      << FormatNumber(point.hit_paper) << ','
      << FormatNumber(point.hit_consistent) << ','
      << FormatNumber(point.expected_length) << ','
      << point.proposed.sweeps_used << ','
      << FormatNumber(point.baseline.hit_paper) << ','
      << FormatNumber(point.baseline.hit_consistent) << ','
      << FormatNumber(point.baseline.expected_length);
  if (point.simulation) {
    const SimReport& s = *point.simulation;
    out << ',' << s.sessions << ',' << config.simulation.seed << ','
        << FormatNumber(s.all_hit_rate.mean) << ','
        << FormatNumber(s.all_hit_rate.std_error) << ','
        << FormatNumber(s.mean_length.mean) << ','
        << FormatNumber(s.mean_length.std_error) << ','
        << FormatNumber(s.per_request_hit_rate.mean) << ','
        << FormatNumber(s.per_request_hit_rate.std_error);
  } else {
    out << ",,,,,,,,";
  }
  if (config.wall_time) out << ',' << FormatNumber(point.wall_seconds);
  out << '\n';
}

int RunOptimize(const ExperimentConfig& config, std::ostream& csv,
                std::ostream& log) {
  ExperimentConfig single = config;
  single.sweep.reset();
  const std::vector<PointResult> points =
      EvaluatePoints(single, single.simulate_sweep);
  WriteResultHeader(csv, single);
  WriteResultRow(csv, single, 0, points.front());
  LogPoint(log, single, points.front());
  return kExitOk;
}

int RunSweep(const ExperimentConfig& config, std::ostream& csv,
             std::ostream& log) {
  if (!config.sweep) {
    throw Error(ErrorCode::kInvalidParameter,
                "config: sweep needs a [sweep] section");
  }
  const std::vector<PointResult> points =
      EvaluatePoints(config, config.simulate_sweep);
  WriteResultHeader(csv, config);
  for (std::size_t i = 0; i < points.size(); ++i) {
    WriteResultRow(csv, config, static_cast<int>(i), points[i]);
    log << SweepParameterName(config.sweep->parameter) << " = "
        << FormatNumber(*points[i].sweep_value) << ": ";
    LogPoint(log, config, points[i]);
  }
  return kExitOk;
}

int RunSimulate(const ExperimentConfig& config, std::ostream& csv,
                std::ostream& log) {
  ExperimentConfig single = config;
  single.sweep.reset();
  const PointResult point = EvaluatePoints(single, true).front();
  WriteResultHeader(csv, single);
  WriteResultRow(csv, single, 0, point);
  LogPoint(log, single, point);
  const SimReport& s = *point.simulation;
  log << "simulated " << s.sessions << " sessions: all-hit "
      << FormatNumber(s.all_hit_rate.mean) << " +- "
      << FormatNumber(s.all_hit_rate.std_error) << ", mean length "
      << FormatNumber(s.mean_length.mean) << " +- "
      << FormatNumber(s.mean_length.std_error) << '\n';
  if (!config.trace_path.empty()) {
    std::ofstream trace(config.trace_path, std::ios::binary);
    if (!trace) {
      throw Error(ErrorCode::kInvalidParameter,
                  "cannot write trace file '" + config.trace_path + "'");
    }
    WriteTraceDump(trace, s.traces);
  }
  return kExitOk;
}

int RunValidate(const ExperimentConfig& config, std::ostream& csv,
                std::ostream& log) {
  ExperimentConfig single = config;
  single.sweep.reset();
  if (!single.outside_set) {
    single.simulation.outside = OutsidePopularity::kUniformApprox;
  }
  const PointResult point = EvaluatePoints(single, true).front();
  const SimReport& s = *point.simulation;

  struct Metric {
    const char* name;
    double analytical;
    Estimate empirical;
  };
  const Metric metrics[] = {
      {"all_hit_rate", point.hit_consistent, s.all_hit_rate},
      {"mean_length", point.expected_length, s.mean_length},
  };
  csv << "experiment,metric,analytical,empirical,std_error,z,pass\n";
  bool all_pass = true;
  for (const Metric& m : metrics) {
    const double diff = m.empirical.mean - m.analytical;
    double z = 0.0;
    if (m.empirical.std_error > 0.0) {
      z = diff / m.empirical.std_error;
    } else if (std::abs(diff) > 1e-12) {
      z = diff > 0 ? INFINITY : -INFINITY;
    }
    const bool pass = std::abs(z) <= 3.0;
    all_pass = all_pass && pass;
    csv << single.id << ',' << m.name << ',' << FormatNumber(m.analytical)
        << ',' << FormatNumber(m.empirical.mean) << ','
        << FormatNumber(m.empirical.std_error) << ',' << FormatNumber(z) << ','
        << (pass ? "pass" : "fail") << '\n';
    log << m.name << ": analytical " << FormatNumber(m.analytical)
        << ", empirical " << FormatNumber(m.empirical.mean) << ", z "
        << FormatNumber(z) << (pass ? "  PASS" : "  FAIL") << '\n';
  }
  return all_pass ? kExitOk : kExitValidation;
}

}  // namespace catcache::cli
