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

#include "config.h"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "catcache/errors.h"

namespace catcache::cli {
namespace {

namespace pt = boost::property_tree;

[[noreturn]] void Fail(const std::string& message) {
  throw Error(ErrorCode::kInvalidParameter, "config: " + message);
}

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double ToDouble(const std::string& key, const std::string& raw) {
  const std::string s = Trim(raw);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size()) {
    Fail(key + ": expected a number, got '" + raw + "'");
  }
  return value;
}

template <typename Int>
Int ToInt(const std::string& key, const std::string& raw) {
  const std::string s = Trim(raw);
  Int value = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size()) {
    Fail(key + ": expected an integer, got '" + raw + "'");
  }
  return value;
}

bool ToBool(const std::string& key, const std::string& raw) {
  const std::string s = Trim(raw);
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  Fail(key + ": expected true or false, got '" + raw + "'");
}

std::vector<std::string> Split(const std::string& raw) {
  std::vector<std::string> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(Trim(item));
  return out;
}

std::vector<double> ToDoubles(const std::string& key, const std::string& raw) {
  std::vector<double> out;
  for (const std::string& item : Split(raw)) out.push_back(ToDouble(key, item));
  if (out.empty()) Fail(key + ": empty list");
  return out;
}

std::vector<int> ToInts(const std::string& key, const std::string& raw) {
  std::vector<int> out;
  for (const std::string& item : Split(raw)) out.push_back(ToInt<int>(key, item));
  if (out.empty()) Fail(key + ": empty list");
  return out;
}

template <typename T>
T ToEnum(const std::string& key, const std::string& raw,
         const std::map<std::string, T>& names) {
  const auto it = names.find(Trim(raw));
  if (it == names.end()) {
    std::string allowed;
    for (const auto& [name, value] : names) {
      allowed += (allowed.empty() ? "" : ", ") + name;
    }
    Fail(key + ": '" + raw + "' is not one of {" + allowed + "}");
  }
  return it->second;
}

const std::map<std::string, std::set<std::string>>& Schema() {
  static const auto* schema = new std::map<std::string, std::set<std::string>>{
      {"experiment", {"id"}},
      {"library", {"preset", "sizes", "gamma", "gamma_out", "gamma_in", "c_in"}},
      {"cache", {"size", "placement_weights"}},
      {"request", {"epsilon"}},
      {"network", {"kind", "lambda", "radius", "pmf"}},
      {"optimizer", {"objective", "mode", "max_sweeps", "convergence_tol"}},
      {"sweep", {"parameter", "values"}},
      {"simulation",
       {"enabled", "sessions", "seed", "outside_popularity", "field",
        "miss_handling", "trace_path"}},
      {"output", {"path", "wall_time"}},
      {"run", {"workers"}},
  };
  return *schema;
}

void CheckSchema(const pt::ptree& tree) {
  for (const auto& [section, body] : tree) {
    const auto it = Schema().find(section);
    if (it == Schema().end()) {
      if (!body.data().empty()) {
        Fail("key '" + section + "' outside any section");
      }
      Fail("unknown section [" + section + "]");
    }
    for (const auto& [key, value] : body) {
      if (!it->second.contains(key)) {
        Fail("unknown key '" + key + "' in [" + section + "]");
      }
    }
  }
}

std::optional<std::string> Get(const pt::ptree& tree, const std::string& section,
                               const std::string& key) {
  const auto s = tree.get_child_optional(pt::ptree::path_type(section, '\0'));
  if (!s) return std::nullopt;
  const auto v = s->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
  if (!v) return std::nullopt;
  return *v;
}

std::vector<int> PresetSizes(const std::string& preset) {
  if (preset == "A") return {20, 20, 20, 20, 20};
  if (preset == "B") return {35, 25, 20, 15, 5};
  if (preset == "C") return {5, 15, 20, 25, 35};
  return {};
}

}  // namespace

std::string SweepParameterName(SweepParameter parameter) {
  switch (parameter) {
    case SweepParameter::kLambda: return "lambda";
    case SweepParameter::kRadius: return "radius";
    case SweepParameter::kEpsilon: return "epsilon";
    case SweepParameter::kCapacity: return "cache_size";
    case SweepParameter::kGamma: return "gamma";
    case SweepParameter::kGammaOut: return "gamma_out";
    case SweepParameter::kGammaIn: return "gamma_in";
    case SweepParameter::kPlateau: return "c_in";
  }
  return "";
}

ExperimentConfig DefaultConfig() {
  ExperimentConfig config;
  config.problem.library = MakeLibrary(PresetSizes("A"), 1.0, 5.0, 2.4, 69.0);
  config.simulation.network = config.problem.network;
  return config;
}

ExperimentConfig ParseConfig(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    Fail(e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  CheckSchema(tree);

  ExperimentConfig config = DefaultConfig();
  auto get = [&](const char* section, const char* key) {
    return Get(tree, section, key);
  };

  if (auto v = get("experiment", "id")) {
    if (Trim(*v).empty()) Fail("experiment.id: empty");
    if (v->find_first_of(",\"\n") != std::string::npos) {
      Fail("experiment.id: must not contain commas or quotes");
    }
    config.id = Trim(*v);
  }

  // [library]
  LibraryModel& lib = config.problem.library;
  if (auto v = get("library", "preset")) {
    config.preset = ToEnum<std::string>(
        "library.preset", *v,
        {{"A", "A"}, {"B", "B"}, {"C", "C"}, {"custom", "custom"}});
  }
  const auto sizes = get("library", "sizes");
  if (config.preset == "custom") {
    if (!sizes) Fail("library.sizes is required with preset = custom");
    lib.sizes = ToInts("library.sizes", *sizes);
  } else {
    if (sizes) Fail("library.sizes is only allowed with preset = custom");
    lib.sizes = PresetSizes(config.preset);
  }
  if (auto v = get("library", "gamma")) lib.gamma = ToDouble("library.gamma", *v);
  if (auto v = get("library", "gamma_out")) {
    lib.gamma_out = ToDouble("library.gamma_out", *v);
  }
  lib.gamma_in.assign(lib.sizes.size(), 2.4);
  if (auto v = get("library", "gamma_in")) {
    const std::vector<double> g = ToDoubles("library.gamma_in", *v);
    if (g.size() == 1) {
      lib.gamma_in.assign(lib.sizes.size(), g[0]);
    } else if (g.size() == lib.sizes.size()) {
      lib.gamma_in = g;
    } else {
      Fail("library.gamma_in: give one value or one per category");
    }
  }
  if (auto v = get("library", "c_in")) lib.plateau = ToDouble("library.c_in", *v);

  // [cache], [request]
  if (auto v = get("cache", "size")) {
    config.problem.capacity = ToInt<int>("cache.size", *v);
  }
  if (auto v = get("cache", "placement_weights")) {
    config.optimizer.weighting = ToEnum<PlacementWeighting>(
        "cache.placement_weights", *v,
        {{"within", PlacementWeighting::kWithinCategory},
         {"blended", PlacementWeighting::kBlended}});
  }
  if (auto v = get("request", "epsilon")) {
    config.problem.epsilon = ToDouble("request.epsilon", *v);
  }

  // [network]
  std::string kind = "poisson";
  if (auto v = get("network", "kind")) {
    kind = ToEnum<std::string>("network.kind", *v,
                               {{"poisson", "poisson"}, {"pmf", "pmf"}});
  }
  if (kind == "poisson") {
    if (get("network", "pmf")) Fail("network.pmf requires kind = pmf");
    double lambda = 0.02, radius = 10.0;
    if (auto v = get("network", "lambda")) lambda = ToDouble("network.lambda", *v);
    if (auto v = get("network", "radius")) radius = ToDouble("network.radius", *v);
    config.problem.network = NetworkModel::PoissonDisk(lambda, radius);
  } else {
    if (get("network", "lambda") || get("network", "radius")) {
      Fail("network.lambda and network.radius require kind = poisson");
    }
    const auto pmf = get("network", "pmf");
    if (!pmf) Fail("network.pmf is required with kind = pmf");
    config.problem.network = NetworkModel::ExplicitPmf(ToDoubles("network.pmf", *pmf));
  }

  // [optimizer]
  if (auto v = get("optimizer", "objective")) {
    config.optimizer.objective = ToEnum<Objective>(
        "optimizer.objective", *v,
        {{"hit", Objective::kHitRate}, {"length", Objective::kExpectedLength}});
  }
  if (auto v = get("optimizer", "mode")) {
    config.optimizer.mode = ToEnum<ObjectiveMode>(
        "optimizer.mode", *v,
        {{"paper", ObjectiveMode::kPaperVerbatim},
         {"consistent", ObjectiveMode::kGenerativeConsistent}});
  }
  if (auto v = get("optimizer", "max_sweeps")) {
    config.optimizer.max_sweeps = ToInt<int>("optimizer.max_sweeps", *v);
  }
  if (auto v = get("optimizer", "convergence_tol")) {
    config.optimizer.convergence_tol = ToDouble("optimizer.convergence_tol", *v);
  }

  // [sweep]
  const auto parameter = get("sweep", "parameter");
  const auto values = get("sweep", "values");
  if (parameter || values) {
    if (!parameter || !values) Fail("[sweep] needs both parameter and values");
    Sweep sweep;
    sweep.parameter = ToEnum<SweepParameter>(
        "sweep.parameter", *parameter,
        {{"lambda", SweepParameter::kLambda},
         {"radius", SweepParameter::kRadius},
         {"epsilon", SweepParameter::kEpsilon},
         {"cache_size", SweepParameter::kCapacity},
         {"gamma", SweepParameter::kGamma},
         {"gamma_out", SweepParameter::kGammaOut},
         {"gamma_in", SweepParameter::kGammaIn},
         {"c_in", SweepParameter::kPlateau}});
    if (sweep.parameter == SweepParameter::kCapacity) {
      for (int m : ToInts("sweep.values", *values)) sweep.values.push_back(m);
    } else {
      sweep.values = ToDoubles("sweep.values", *values);
    }
    if ((sweep.parameter == SweepParameter::kLambda ||
         sweep.parameter == SweepParameter::kRadius) &&
        kind != "poisson") {
      Fail("sweep.parameter " + Trim(*parameter) + " requires kind = poisson");
    }
    config.sweep = std::move(sweep);
  }

  // [simulation]
  SimConfig& sim = config.simulation;
  if (auto v = get("simulation", "enabled")) {
    config.simulate_sweep = ToBool("simulation.enabled", *v);
  }
  if (auto v = get("simulation", "sessions")) {
    sim.n_sessions = ToInt<std::int64_t>("simulation.sessions", *v);
  }
  if (auto v = get("simulation", "seed")) {
    sim.seed = ToInt<std::uint64_t>("simulation.seed", *v);
  }
  if (auto v = get("simulation", "outside_popularity")) {
    sim.outside = ToEnum<OutsidePopularity>(
        "simulation.outside_popularity", *v,
        {{"exact-mzipf", OutsidePopularity::kExactMandelbrotZipf},
         {"uniform-approx", OutsidePopularity::kUniformApprox}});
    config.outside_set = true;
  }
  if (auto v = get("simulation", "field")) {
    sim.field = ToEnum<FieldResampling>(
        "simulation.field", *v,
        {{"per-request", FieldResampling::kPerRequest},
         {"per-session", FieldResampling::kPerSession}});
  }
  if (auto v = get("simulation", "miss_handling")) {
    sim.miss_handling = ToEnum<MissHandling>(
        "simulation.miss_handling", *v,
        {{"end-session", MissHandling::kEndSession},
         {"continue", MissHandling::kContinueVoluntary}});
  }
  if (auto v = get("simulation", "trace_path")) config.trace_path = Trim(*v);
  sim.record_traces = !config.trace_path.empty();
  sim.network = config.problem.network;

  // [output], [run]
  if (auto v = get("output", "path")) config.output_path = Trim(*v);
  if (auto v = get("output", "wall_time")) {
    config.wall_time = ToBool("output.wall_time", *v);
  }
  if (auto v = get("run", "workers")) {
    config.workers = ToInt<int>("run.workers", *v);
  }
  if (config.workers < 1) Fail("run.workers must be >= 1");
  if (config.output_path.empty()) Fail("output.path: empty");

  config.problem.Validate();
  config.optimizer.Validate();
  sim.Validate();
  if (config.sweep) {
    for (double value : config.sweep->values) {
      ApplySweepValue(config.problem, config.sweep->parameter, value).Validate();
    }
  }
  return config;
}

ExperimentConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail("cannot open '" + path + "'");
  return ParseConfig(in);
}

CacheProblem ApplySweepValue(const CacheProblem& base, SweepParameter parameter,
                             double value) {
  CacheProblem p = base;
  switch (parameter) {
    case SweepParameter::kLambda:
      p.network = NetworkModel::PoissonDisk(value, base.network.radius());
      break;
    case SweepParameter::kRadius:
      p.network = NetworkModel::PoissonDisk(base.network.intensity(), value);
      break;
    case SweepParameter::kEpsilon:
      p.epsilon = value;
      break;
    case SweepParameter::kCapacity:
      p.capacity = static_cast<int>(value);
      break;
    case SweepParameter::kGamma:
      p.library.gamma = value;
      break;
    case SweepParameter::kGammaOut:
      p.library.gamma_out = value;
      break;
    case SweepParameter::kGammaIn:
      p.library.gamma_in.assign(p.library.sizes.size(), value);
      break;
    case SweepParameter::kPlateau:
      p.library.plateau = value;
      break;
  }
  return p;
}

}  // namespace catcache::cli
