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

// Integer cache allocation across categories by pairwise coordinate descent.

#ifndef CATCACHE_ALLOCATOR_H_
#define CATCACHE_ALLOCATOR_H_

#include <optional>
#include <string_view>
#include <vector>

#include "catcache/analytics.h"
#include "catcache/network.h"
#include "catcache/placement.h"
#include "catcache/popularity.h"

namespace catcache {

// Everything that defines one allocation instance.
struct CacheProblem {
  LibraryModel library;
  NetworkModel network = NetworkModel::PoissonDisk(0.02, 10.0);
  double epsilon = 0.1;
  int capacity = 30;

  void Validate() const;
};

enum class Objective { kHitRate, kExpectedLength };

std::string_view ObjectiveName(Objective objective);

// Which popularity the within-category placement is optimized against.
// kWithinCategory uses the category's own Mandelbrot-Zipf law. kBlended uses
//   f_i p1_eff a_{i,n} + sum_{k != i} f_k p_out_eff / (N - N_k),
// the probability that a request of a random session targets the content.
enum class PlacementWeighting { kWithinCategory, kBlended };

struct AllocatorConfig {
  Objective objective = Objective::kHitRate;
  ObjectiveMode mode = ObjectiveMode::kPaperVerbatim;
  int max_sweeps = 50;
  double convergence_tol = 1e-12;
  PlacementWeighting weighting = PlacementWeighting::kWithinCategory;

  void Validate() const;
};

// Evaluates objectives of integer allocations. The optimal placement of a
// category depends on its own share only, so placements are memoized per
// (category, share). Not thread-safe; use one evaluator per worker.
class AllocationEvaluator {
 public:
  AllocationEvaluator(const CacheProblem& problem,
                      PlacementWeighting weighting);

  const CacheProblem& problem() const { return problem_; }
  const Distribution& category_popularity() const { return popularity_; }
  const RequestModel& request() const { return request_; }

  // Upper bound of category i's share: min(capacity, N_i).
  int ShareLimit(int category) const;

  const std::vector<double>& Placement(int category, int share);
  PlacementPolicy Policy(const std::vector<int>& alpha);
  HitTerms Terms(const std::vector<int>& alpha);
  double Evaluate(const std::vector<int>& alpha, Objective objective,
                  ObjectiveMode mode);

 private:
  struct Entry {
    std::vector<double> b;
    double within_hit = 0.0;
    double miss_sum = 0.0;
  };
  const Entry& Lookup(int category, int share);

  CacheProblem problem_;
  Distribution popularity_;
  RequestModel request_;
  std::vector<Distribution> within_weights_;
  std::vector<Distribution> placement_weights_;
  std::vector<std::vector<std::optional<Entry>>> memo_;
};

struct PairOutcome {
  int alpha_u = 0;
  int alpha_v = 0;
  double objective = 0.0;
};

// Re-splits the pair budget beta = capacity - sum_{i != u, v} alpha_i between
// categories u and v. Every feasible alpha_u is scanned in increasing order
// and only a strictly better objective replaces the running best, so ties go
// to the smaller alpha_u.
PairOutcome SolvePair(int u, int v, const std::vector<int>& current,
                      const AllocatorConfig& config,
                      AllocationEvaluator& evaluator);

// One accepted pair move; alpha_u and alpha_v are the new shares.
struct PairMove {
  int u = 0;
  int v = 0;
  int alpha_u = 0;
  int alpha_v = 0;
  double objective = 0.0;
};

struct AllocationResult {
  Allocation allocation;
  PlacementPolicy policy;
  double objective_value = 0.0;
  int sweeps_used = 0;
  std::vector<PairMove> trace;  // accepted moves, objective non-decreasing
};

// floor(capacity / K) per category, then one unit at a time to categories in
// decreasing global popularity, skipping categories that are already full.
std::vector<int> InitialAllocation(const CacheProblem& problem);

// Pairwise greedy allocation started from InitialAllocation. Sweeps over all
// ordered pairs until a sweep gains no more than convergence_tol or
// max_sweeps is hit. A pair move is accepted only if it strictly improves
// the incumbent objective.
AllocationResult GreedyAllocate(const CacheProblem& problem,
                                const AllocatorConfig& config);

// Same as GreedyAllocate, from a caller-supplied feasible start whose shares
// sum to the capacity.
AllocationResult GreedyAllocateFrom(const CacheProblem& problem,
                                    const AllocatorConfig& config,
                                    std::vector<int> start);

// One-shot baseline: a single placement over the whole library with budget
// equal to the capacity, against the marginal request probability
// f_i * a_{i,n} of each content. Category shares come out fractional.
struct BaselineResult {
  PlacementPolicy policy;
  std::vector<double> shares;
  HitTerms terms;
  double hit_paper = 0.0;
  double hit_consistent = 0.0;
  double expected_length = 0.0;

  double hit(ObjectiveMode mode) const {
    return mode == ObjectiveMode::kPaperVerbatim ? hit_paper : hit_consistent;
  }
};

BaselineResult BaselineOneShot(const CacheProblem& problem);

}  // namespace catcache

#endif  // CATCACHE_ALLOCATOR_H_
