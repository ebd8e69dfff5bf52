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

// Acceptance suite. Prints one PASS/FAIL line per criterion; with
// --criterion ID only that criterion (or sub-check, e.g. 8c) runs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "catcache/allocator.h"
#include "catcache/analytics.h"
#include "catcache/placement.h"
#include "catcache/simulator.h"
#include "config.h"
#include "oracles.h"
#include "runners.h"

namespace catcache {
namespace {

constexpr ObjectiveMode kPaper = ObjectiveMode::kPaperVerbatim;
constexpr ObjectiveMode kConsistent = ObjectiveMode::kGenerativeConsistent;

struct Check {
  std::string id;
  std::string title;
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, value);
  return buf;
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string TimeNote(double seconds, double limit, bool* pass) {
  if (seconds > limit) *pass = false;
  return Fmt("%.2f s", seconds) + Fmt(" (limit %.0f s)", limit);
}

CacheProblem Reference(std::vector<int> sizes = {20, 20, 20, 20, 20},
                       double gamma_out = 5.0) {
  CacheProblem p;
  p.library = MakeLibrary(std::move(sizes), 1.0, gamma_out, 2.4, 69.0);
  return p;
}

std::vector<int> RandomFullAllocation(const CacheProblem& p, std::mt19937_64& rng) {
  const int k = p.library.num_categories();
  std::vector<int> alpha(k, 0);
  for (int unit = 0; unit < p.capacity; ++unit) {
    std::vector<int> open;
    for (int i = 0; i < k; ++i) {
      if (alpha[i] < std::min(p.capacity, p.library.sizes[i])) open.push_back(i);
    }
    ++alpha[open[std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng)]];
  }
  return alpha;
}

// 1. Truncated series against the closed form.
Check SeriesIdentity() {
  Timer timer;
  Check c{"1", "series identity", true, ""};
  const CacheProblem p = Reference();
  AllocationEvaluator evaluator(p, PlacementWeighting::kWithinCategory);
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const HitTerms terms = evaluator.Terms(RandomFullAllocation(p, rng));
    for (ObjectiveMode mode : {kPaper, kConsistent}) {
      const double closed = ExpectedHitProbability(
          terms, evaluator.category_popularity(), evaluator.request(), mode);
      const double series = testing::TruncatedHitSeries(
          terms, evaluator.category_popularity(), evaluator.request(), mode, 200);
      worst = std::max(worst, std::abs(series - closed) / closed);
    }
  }
  c.pass = worst <= 1e-9;
  c.detail = "20 allocations x 2 modes, max relative error " + Fmt("%.3g", worst) +
             ", " + TimeNote(timer.seconds(), 1, &c.pass);
  return c;
}

// 2. Water-filling against a 0.001-step grid oracle.
Check PlacementOracle() {
  Timer timer;
  Check c{"2", "placement vs grid oracle", true, ""};
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 6)(rng);
    const int budget = std::uniform_int_distribution<int>(0, n)(rng);
    const double mu = 1.0 + 9.0 * unit(rng);
    std::vector<double> w(n);
    for (double& x : w) x = unit(rng);
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x /= sum;
    const NetworkModel net = NetworkModel::PoissonDisk(mu / (std::numbers::pi * 100.0), 10.0);
    const std::vector<double> b = OptimalWithinCategory(w, budget, net);
    const double ours = testing::PoissonPlacementObjective(w, b, mu);
    const double oracle = testing::PairGridDescent(w, budget, mu, 0.001);
    worst = std::max(worst, std::abs(ours - oracle));
  }
  c.pass = worst <= 1e-5;
  c.detail = "50 instances, max |objective - oracle| " + Fmt("%.3g", worst) +
             ", " + TimeNote(timer.seconds(), 30, &c.pass);
  return c;
}

AllocatorConfig SuiteConfig(int trial) {
  AllocatorConfig config;
  config.objective = trial % 2 ? Objective::kExpectedLength : Objective::kHitRate;
  config.mode = (trial / 2) % 2 ? kConsistent : kPaper;
  return config;
}

// 3. Saturation and pairwise local optimality over a random suite.
Check Saturation() {
  Timer timer;
  Check c{"3", "saturation and local optimality", true, ""};
  std::mt19937_64 rng(303);
  int saturated = 0;
  double worst_gain = -INFINITY;
  for (int trial = 0; trial < 100; ++trial) {
    const CacheProblem p = testing::RandomProblem(rng);
    const AllocatorConfig config = SuiteConfig(trial);
    const AllocationResult r = GreedyAllocate(p, config);
    const auto& alpha = r.allocation.alpha;
    if (std::accumulate(alpha.begin(), alpha.end(), 0) == p.capacity) ++saturated;
    AllocationEvaluator evaluator(p, config.weighting);
    const int k = p.library.num_categories();
    for (int u = 0; u < k; ++u) {
      for (int v = 0; v < k; ++v) {
        if (u == v) continue;
        const PairOutcome o = SolvePair(u, v, alpha, config, evaluator);
        worst_gain = std::max(worst_gain, o.objective - r.objective_value);
      }
    }
  }
  c.pass = saturated == 100 && worst_gain <= 1e-12;
  c.detail = std::to_string(saturated) + "/100 saturated, best pair gain " +
             Fmt("%.3g", worst_gain) + ", " + TimeNote(timer.seconds(), 300, &c.pass);
  return c;
}

// Per-request success of preferred k never rises after moving one unit
// from another category into k, counted over `allocations`.
struct TransferCount {
  long moves = 0;
  long violations = 0;
};

TransferCount CountTransferViolations(
    AllocationEvaluator& evaluator,
    const std::vector<std::vector<int>>& allocations) {
  TransferCount count;
  const int k_count = evaluator.problem().library.num_categories();
  for (const auto& alpha : allocations) {
    const HitTerms base = evaluator.Terms(alpha);
    for (int k = 0; k < k_count; ++k) {
      if (alpha[k] >= evaluator.ShareLimit(k)) continue;
      const double before = PerRequestSuccess(k, base, evaluator.request(), kPaper);
      for (int u = 0; u < k_count; ++u) {
        if (u == k || alpha[u] == 0) continue;
        std::vector<int> moved = alpha;
        --moved[u];
        ++moved[k];
        ++count.moves;
        const HitTerms after = evaluator.Terms(moved);
        if (!(PerRequestSuccess(k, after, evaluator.request(), kPaper) > before)) {
          ++count.violations;
        }
      }
    }
  }
  return count;
}

// 4. Transfers into the preferred category, at every allocation the
// allocator visits on the reference setup (start, each accepted move;
// both objectives and modes). The count over all full allocations is
// reported alongside: the monotonicity rests on small placement
// probabilities in k and fails once k is nearly fully cached.
Check PreferredTransfer() {
  Timer timer;
  Check c{"4", "preferred-category transfer monotonicity", true, ""};
  const CacheProblem p = Reference();
  AllocationEvaluator evaluator(p, PlacementWeighting::kWithinCategory);
  std::vector<std::vector<int>> visited = {InitialAllocation(p)};
  for (Objective obj : {Objective::kHitRate, Objective::kExpectedLength}) {
    for (ObjectiveMode mode : {kPaper, kConsistent}) {
      AllocatorConfig config;
      config.objective = obj;
      config.mode = mode;
      std::vector<int> alpha = InitialAllocation(p);
      for (const PairMove& move : GreedyAllocate(p, config).trace) {
        alpha[move.u] = move.alpha_u;
        alpha[move.v] = move.alpha_v;
        visited.push_back(alpha);
      }
    }
  }
  std::sort(visited.begin(), visited.end());
  visited.erase(std::unique(visited.begin(), visited.end()), visited.end());
  const TransferCount on_path = CountTransferViolations(evaluator, visited);
  const auto every = testing::AllFullAllocations(p.library.sizes, p.capacity);
  const TransferCount all = CountTransferViolations(evaluator, every);
  c.pass = on_path.violations == 0 && on_path.moves > 0;
  c.detail = std::to_string(visited.size()) + " visited allocations, " +
             std::to_string(on_path.moves) + " transfers, " +
             std::to_string(on_path.violations) +
             " non-increasing; over all " + std::to_string(every.size()) +
             " allocations " + std::to_string(all.violations) + "/" +
             std::to_string(all.moves) + " non-increasing, " +
             TimeNote(timer.seconds(), 10, &c.pass);
  return c;
}

// 5. Greedy against exhaustive enumeration on K = 3, N = (4, 4, 4), M = 6.
Check GreedyVsExhaustive() {
  Timer timer;
  Check c{"5", "greedy vs exhaustive", true, ""};
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int optimal = 0, runs = 0;
  double worst_gap = 0.0;
  for (int seed = 0; seed < 10; ++seed) {
    CacheProblem p;
    p.library.sizes = {4, 4, 4};
    p.library.gamma = 2.0 * unit(rng);
    p.library.gamma_out = 6.0 * unit(rng);
    for (int i = 0; i < 3; ++i) p.library.gamma_in.push_back(3.0 * unit(rng));
    p.library.plateau = 80.0 * unit(rng);
    p.network = NetworkModel::PoissonDisk(0.005 + 0.035 * unit(rng), 10.0);
    p.epsilon = 0.02 + 0.28 * unit(rng);
    p.capacity = 6;
    for (Objective obj : {Objective::kHitRate, Objective::kExpectedLength}) {
      for (ObjectiveMode mode : {kPaper, kConsistent}) {
        AllocatorConfig config;
        config.objective = obj;
        config.mode = mode;
        const AllocationResult r = GreedyAllocate(p, config);
        AllocationEvaluator evaluator(p, config.weighting);
        double best = -INFINITY;
        for (const auto& alpha : testing::AllFullAllocations(p.library.sizes, 6)) {
          best = std::max(best, evaluator.Evaluate(alpha, obj, mode));
        }
        ++runs;
        const double gap = (best - r.objective_value) / best;
        if (gap <= 1e-12) {
          ++optimal;
          continue;
        }
        worst_gap = std::max(worst_gap, gap);
        bool local = true;
        for (int u = 0; u < 3; ++u) {
          for (int v = 0; v < 3; ++v) {
            if (u == v) continue;
            local = local && SolvePair(u, v, r.allocation.alpha, config, evaluator)
                                     .objective <= r.objective_value + 1e-12;
          }
        }
        if (gap > 0.01 || !local) c.pass = false;
      }
    }
  }
  c.detail = std::to_string(optimal) + "/" + std::to_string(runs) +
             " globally optimal, worst logged gap " + Fmt("%.3g", worst_gap) +
             ", " + TimeNote(timer.seconds(), 60, &c.pass);
  return c;
}

// 6. Closed forms against 10^5 simulated sessions.
Check SimulationAgreement() {
  Timer timer;
  Check c{"6", "analytics vs simulation", true, ""};
  const CacheProblem p = Reference();
  AllocatorConfig config;
  config.mode = kConsistent;
  const AllocationResult r = GreedyAllocate(p, config);
  SimConfig sim;
  sim.n_sessions = 100000;
  sim.seed = 606;
  sim.outside = OutsidePopularity::kUniformApprox;
  sim.network = p.network;
  const SimReport rep = EstimateObjectives(sim, p.library, p.epsilon,
                                           r.allocation, r.policy);
  const HitTerms terms = ComputeHitTerms(r.policy, p.library, p.network);
  const Distribution f = CategoryPopularity(p.library);
  const RequestModel req = MakeRequestModel(p.library, p.epsilon);
  const double hit = ExpectedHitProbability(terms, f, req, kConsistent);
  const double len = ExpectedLength(terms, f, req);
  const double z_hit = (rep.all_hit_rate.mean - hit) / rep.all_hit_rate.std_error;
  const double z_len = (rep.mean_length.mean - len) / rep.mean_length.std_error;
  c.pass = std::abs(z_hit) <= 3.0 && std::abs(z_len) <= 3.0;
  c.detail = "all-hit " + Fmt("%.5f", rep.all_hit_rate.mean) + " vs " +
             Fmt("%.5f", hit) + " (z " + Fmt("%.2f", z_hit) + "), length " +
             Fmt("%.4f", rep.mean_length.mean) + " vs " + Fmt("%.4f", len) +
             " (z " + Fmt("%.2f", z_len) + "), " +
             TimeNote(timer.seconds(), 120, &c.pass);
  return c;
}

// 7. E[L] <= 1/epsilon - 1, analytically and empirically.
Check LengthBound() {
  Timer timer;
  Check c{"7", "expected length bound", true, ""};
  std::mt19937_64 rng(303);  // the suite of criterion 3
  double worst_excess = -INFINITY, worst_z = -INFINITY;
  for (int trial = 0; trial < 100; ++trial) {
    const CacheProblem p = testing::RandomProblem(rng);
    const AllocationResult r = GreedyAllocate(p, SuiteConfig(trial));
    const double bound = 1.0 / p.epsilon - 1.0;
    const HitTerms terms = ComputeHitTerms(r.policy, p.library, p.network);
    const double len = ExpectedLength(terms, CategoryPopularity(p.library),
                                      MakeRequestModel(p.library, p.epsilon));
    worst_excess = std::max(worst_excess, len - bound);
    SimConfig sim;
    sim.n_sessions = 5000;
    sim.seed = 700 + trial;
    sim.network = p.network;
    const SimReport rep = EstimateObjectives(sim, p.library, p.epsilon,
                                             r.allocation, r.policy);
    if (rep.mean_length.std_error > 0.0) {
      worst_z = std::max(worst_z,
                         (rep.mean_length.mean - bound) / rep.mean_length.std_error);
    } else if (rep.mean_length.mean > bound) {
      worst_z = INFINITY;
    }
  }
  c.pass = worst_excess <= 1e-12 && worst_z <= 3.0;
  c.detail = "100 configs, max E[L] - bound " + Fmt("%.3g", worst_excess) +
             ", max empirical excess " + Fmt("%.2f", worst_z) + " SE, " +
             TimeNote(timer.seconds(), 300, &c.pass);
  return c;
}

double Optimized(const CacheProblem& p, Objective obj) {
  AllocatorConfig config;
  config.objective = obj;
  return GreedyAllocate(p, config).objective_value;
}

double BaselineValue(const CacheProblem& p, Objective obj) {
  const BaselineResult l1 = BaselineOneShot(p);
  return obj == Objective::kHitRate ? l1.hit(kPaper) : l1.expected_length;
}

const std::vector<double>& LambdaGrid() {
  static const std::vector<double> grid = {0.005, 0.01, 0.015, 0.02, 0.025, 0.03};
  return grid;
}

std::string Join(const std::vector<double>& v, const char* format) {
  std::string out;
  for (double x : v) out += (out.empty() ? "" : " ") + Fmt(format, x);
  return out;
}

// 8. Qualitative trends of allocation and gain.
std::vector<Check> FigureTrends() {
  std::vector<Check> checks;
  {
    Check c{"8a", "alpha_1 non-decreasing in gamma_out (Case A)", true, ""};
    std::vector<double> a1;
    for (double g = 1; g <= 5; ++g) {
      AllocatorConfig config;
      a1.push_back(GreedyAllocate(Reference({20, 20, 20, 20, 20}, g), config)
                       .allocation.alpha[0]);
    }
    c.pass = std::is_sorted(a1.begin(), a1.end());
    c.detail = "alpha_1 over gamma_out 1..5: " + Join(a1, "%.0f");
    checks.push_back(c);
  }
  {
    Check c{"8b", "Case B vs Case A at gamma_out 5", true, ""};
    const auto a = GreedyAllocate(Reference({20, 20, 20, 20, 20}), {}).allocation.alpha;
    const auto b = GreedyAllocate(Reference({35, 25, 20, 15, 5}), {}).allocation.alpha;
    c.pass = b[0] > a[0] && b[4] > a[4];
    c.detail = "alpha_1 " + std::to_string(b[0]) + " vs " + std::to_string(a[0]) +
               ", alpha_5 " + std::to_string(b[4]) + " vs " + std::to_string(a[4]);
    checks.push_back(c);
  }
  {
    Check c{"8c", "lambda sweep: proposed >= L1, gap non-increasing", true, ""};
    for (Objective obj : {Objective::kHitRate, Objective::kExpectedLength}) {
      std::vector<double> gaps;
      bool dominates = true;
      for (double lambda : LambdaGrid()) {
        CacheProblem p = Reference();
        p.network = NetworkModel::PoissonDisk(lambda, 10.0);
        const double gap = Optimized(p, obj) - BaselineValue(p, obj);
        dominates = dominates && gap >= 0.0;
        gaps.push_back(gap);
      }
      bool monotone = true;
      for (std::size_t i = 1; i < gaps.size(); ++i) {
        monotone = monotone && gaps[i] <= gaps[i - 1];
      }
      c.pass = c.pass && dominates && monotone;
      c.detail += std::string(c.detail.empty() ? "" : "; ") +
                  std::string(ObjectiveName(obj)) + " gaps " + Join(gaps, "%.4f") +
                  (dominates ? " (>= L1" : " (below L1") +
                  (monotone ? ", non-increasing)" : ", not monotone)");
    }
    checks.push_back(c);
  }
  {
    Check c{"8d", "E[L] gap larger at epsilon 0.02 than at 0.1", true, ""};
    std::vector<double> small, large;
    for (double lambda : LambdaGrid()) {
      for (double eps : {0.02, 0.1}) {
        CacheProblem p = Reference();
        p.network = NetworkModel::PoissonDisk(lambda, 10.0);
        p.epsilon = eps;
        const double gap = Optimized(p, Objective::kExpectedLength) -
                           BaselineValue(p, Objective::kExpectedLength);
        (eps == 0.02 ? small : large).push_back(gap);
      }
    }
    for (std::size_t i = 0; i < small.size(); ++i) {
      c.pass = c.pass && small[i] > large[i];
    }
    c.detail = "gaps at 0.02: " + Join(small, "%.3f") + "; at 0.1: " +
               Join(large, "%.3f");
    checks.push_back(c);
  }
  return checks;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// 9. Sweep reruns are byte-identical, in process and through the binary.
Check Determinism(const std::string& cli) {
  Timer timer;
  Check c{"9", "sweep determinism", true, ""};
  const std::string ini =
      "[experiment]\nid = determinism\n"
      "[sweep]\nparameter = lambda\n"
      "values = 0.005, 0.01, 0.015, 0.02, 0.025, 0.03\n"
      "[simulation]\nenabled = true\nsessions = 20000\nseed = 909\n";
  std::istringstream in(ini);
  cli::ExperimentConfig config = cli::ParseConfig(in);
  std::vector<std::string> outputs;
  for (int workers : {1, 1, 4}) {
    config.workers = workers;
    std::ostringstream csv, log;
    cli::RunSweep(config, csv, log);
    outputs.push_back(csv.str());
  }
  c.pass = outputs[0] == outputs[1] && outputs[0] == outputs[2];
  c.detail = "in-process reruns (1, 1, 4 workers) " +
             std::string(c.pass ? "identical" : "differ");
  if (!cli.empty()) {
    const auto dir = std::filesystem::temp_directory_path() /
                     ("catcache_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    const std::string cfg = (dir / "sweep.ini").string();
    std::ofstream(cfg) << ini;
    std::vector<std::string> files;
    bool ok = true;
    for (int run = 0; run < 2; ++run) {
      const std::string out = (dir / ("run" + std::to_string(run) + ".csv")).string();
      const std::string cmd = "\"" + cli + "\" sweep --config \"" + cfg +
                              "\" --out \"" + out + "\" --workers " +
                              std::to_string(1 + 3 * run) + " > /dev/null";
      ok = ok && std::system(cmd.c_str()) == 0;
      files.push_back(ReadFile(out));
    }
    const bool same = ok && files[0] == files[1] && files[0] == outputs[0];
    c.pass = c.pass && same;
    c.detail += std::string(", binary reruns ") + (same ? "identical" : "differ");
    std::filesystem::remove_all(dir);
  }
  c.detail += ", " + TimeNote(timer.seconds(), 600, &c.pass);
  return c;
}

}  // namespace
}  // namespace catcache

int main(int argc, char** argv) {
  std::string only, cli;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      only = argv[++i];
    } else if (arg == "--cli" && i + 1 < argc) {
      cli = argv[++i];
    } else {
      std::cerr << "usage: acceptance [--criterion ID] [--cli PATH]\n";
      return 2;
    }
  }
  using namespace catcache;
  const std::vector<std::pair<std::string, std::function<std::vector<Check>()>>>
      criteria = {
          {"1", [] { return std::vector<Check>{SeriesIdentity()}; }},
          {"2", [] { return std::vector<Check>{PlacementOracle()}; }},
          {"3", [] { return std::vector<Check>{Saturation()}; }},
          {"4", [] { return std::vector<Check>{PreferredTransfer()}; }},
          {"5", [] { return std::vector<Check>{GreedyVsExhaustive()}; }},
          {"6", [] { return std::vector<Check>{SimulationAgreement()}; }},
          {"7", [] { return std::vector<Check>{LengthBound()}; }},
          {"8", [] { return FigureTrends(); }},
          {"9", [&] { return std::vector<Check>{Determinism(cli)}; }},
      };

  bool all_pass = true, ran = false;
  for (const auto& [id, run] : criteria) {
    if (!only.empty() && only.rfind(id, 0) != 0) continue;
    std::vector<Check> checks = run();
    if (only.size() > id.size()) {
      std::erase_if(checks, [&](const Check& c) { return c.id != only; });
    }
    if (checks.empty()) continue;
    ran = true;
    bool pass = true;
    for (const Check& c : checks) pass = pass && c.pass;
    all_pass = all_pass && pass;
    if (checks.size() == 1 && checks[0].id == id) {
      std::cout << "criterion " << id << ": " << (pass ? "PASS" : "FAIL") << "  "
                << checks[0].title << ": " << checks[0].detail << '\n';
    } else {
      std::cout << "criterion " << id << ": " << (pass ? "PASS" : "FAIL") << '\n';
      for (const Check& c : checks) {
        std::cout << "  " << c.id << ": " << (c.pass ? "PASS" : "FAIL") << "  "
                  << c.title << ": " << c.detail << '\n';
      }
    }
  }
  if (!ran) {
    std::cerr << "no criterion matches '" << only << "'\n";
    return 2;
  }
  return all_pass ? 0 : 1;
}
