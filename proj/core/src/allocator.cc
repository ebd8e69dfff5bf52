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

#include "catcache/allocator.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "catcache/errors.h"

namespace catcache {
namespace {

void CheckFeasible(const CacheProblem& problem) {
  if (problem.library.total_contents() < problem.capacity) {
    throw Error(ErrorCode::kInfeasible,
                "library holds " +
                    std::to_string(problem.library.total_contents()) +
                    " contents, fewer than the cache size " +
                    std::to_string(problem.capacity));
  }
}

}  // namespace

void CacheProblem::Validate() const {
  library.Validate();
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorCode::kInvalidParameter, "epsilon must lie in (0, 1)");
  }
  if (capacity < 1) {
    throw Error(ErrorCode::kInvalidParameter, "cache size must be positive");
  }
}

std::string_view ObjectiveName(Objective objective) {
  return objective == Objective::kHitRate ? "hit" : "length";
}

void AllocatorConfig::Validate() const {
  if (max_sweeps < 1) {
    throw Error(ErrorCode::kInvalidParameter, "max_sweeps must be >= 1");
  }
  if (!(convergence_tol >= 0.0)) {
    throw Error(ErrorCode::kInvalidParameter, "convergence_tol must be >= 0");
  }
}

AllocationEvaluator::AllocationEvaluator(const CacheProblem& problem,
                                         PlacementWeighting weighting)
    : problem_(problem) {
  problem_.Validate();
  popularity_ = CategoryPopularity(problem_.library);
  request_ = MakeRequestModel(problem_.library, problem_.epsilon);
  const int k_count = problem_.library.num_categories();
  const int total = problem_.library.total_contents();
  for (int i = 0; i < k_count; ++i) {
    within_weights_.push_back(WithinCategoryPopularity(problem_.library, i));
  }
  if (weighting == PlacementWeighting::kWithinCategory) {
    placement_weights_ = within_weights_;
  } else {
    for (int i = 0; i < k_count; ++i) {
      double outside = 0.0;
      for (int k = 0; k < k_count; ++k) {
        if (k == i) continue;
        outside += popularity_[k] * request_.p_out_eff /
                   (total - problem_.library.sizes[k]);
      }
      Distribution w = within_weights_[i];
      for (double& p : w.probs) {
        p = popularity_[i] * request_.p1_eff * p + outside;
      }
      placement_weights_.push_back(std::move(w));
    }
  }
  memo_.resize(k_count);
  for (int i = 0; i < k_count; ++i) memo_[i].resize(ShareLimit(i) + 1);
}

int AllocationEvaluator::ShareLimit(int category) const {
  return std::min(problem_.capacity, problem_.library.sizes.at(category));
}

const AllocationEvaluator::Entry& AllocationEvaluator::Lookup(int category,
                                                              int share) {
  if (share < 0 || share > ShareLimit(category)) {
    throw Error(ErrorCode::kInvalidParameter,
                "share " + std::to_string(share) + " out of range for category " +
                    std::to_string(category));
  }
  std::optional<Entry>& slot = memo_[category][share];
  if (!slot) {
    Entry entry;
    entry.b = OptimalWithinCategory(placement_weights_[category].view(), share,
                                    problem_.network);
    entry.within_hit = HitWithin(entry.b, within_weights_[category].view(),
                                 problem_.network);
    for (double b : entry.b) entry.miss_sum += problem_.network.MissFactor(b);
    slot = std::move(entry);
  }
  return *slot;
}

const std::vector<double>& AllocationEvaluator::Placement(int category,
                                                          int share) {
  return Lookup(category, share).b;
}

PlacementPolicy AllocationEvaluator::Policy(const std::vector<int>& alpha) {
  PlacementPolicy policy;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    policy.probs.push_back(Placement(static_cast<int>(i), alpha[i]));
  }
  return policy;
}

HitTerms AllocationEvaluator::Terms(const std::vector<int>& alpha) {
  const int k_count = problem_.library.num_categories();
  if (static_cast<int>(alpha.size()) != k_count) {
    throw Error(ErrorCode::kInvalidParameter,
                "allocation needs one share per category");
  }
  HitTerms terms;
  terms.within.resize(k_count);
  terms.outside.assign(k_count, 0.0);
  double all_miss = 0.0;
  for (int i = 0; i < k_count; ++i) {
    const Entry& e = Lookup(i, alpha[i]);
    terms.within[i] = e.within_hit;
    all_miss += e.miss_sum;
  }
  if (k_count < 2) return terms;
  const int total = problem_.library.total_contents();
  for (int k = 0; k < k_count; ++k) {
    const double outside_miss = all_miss - Lookup(k, alpha[k]).miss_sum;
    terms.outside[k] = std::clamp(
        1.0 - outside_miss / (total - problem_.library.sizes[k]), 0.0, 1.0);
  }
  return terms;
}

double AllocationEvaluator::Evaluate(const std::vector<int>& alpha,
                                     Objective objective, ObjectiveMode mode) {
  const HitTerms terms = Terms(alpha);
  if (objective == Objective::kHitRate) {
    return ExpectedHitProbability(terms, popularity_, request_, mode);
  }
  return ExpectedLength(terms, popularity_, request_);
}

PairOutcome SolvePair(int u, int v, const std::vector<int>& current,
                      const AllocatorConfig& config,
                      AllocationEvaluator& evaluator) {
  const int k_count = static_cast<int>(current.size());
  if (u == v || u < 0 || v < 0 || u >= k_count || v >= k_count) {
    throw Error(ErrorCode::kInvalidParameter, "pair needs two distinct categories");
  }
  int others = 0;
  for (int i = 0; i < k_count; ++i) {
    if (i != u && i != v) others += current[i];
  }
  const int beta = evaluator.problem().capacity - others;
  const int lo = std::max(0, beta - evaluator.ShareLimit(v));
  const int hi = std::min(beta, evaluator.ShareLimit(u));
  if (beta < 0 || lo > hi) {
    throw Error(ErrorCode::kInfeasiblePair,
                "no feasible split of pair budget " + std::to_string(beta));
  }
  std::vector<int> candidate = current;
  PairOutcome best;
  bool have_best = false;
  for (int alpha_u = lo; alpha_u <= hi; ++alpha_u) {
    candidate[u] = alpha_u;
    candidate[v] = beta - alpha_u;
    const double value =
        evaluator.Evaluate(candidate, config.objective, config.mode);
    if (!have_best || value > best.objective) {
      best = {alpha_u, beta - alpha_u, value};
      have_best = true;
    }
  }
  return best;
}

std::vector<int> InitialAllocation(const CacheProblem& problem) {
  problem.Validate();
  CheckFeasible(problem);
  const LibraryModel& library = problem.library;
  const int k_count = library.num_categories();
  auto limit = [&](int i) { return std::min(problem.capacity, library.sizes[i]); };

  std::vector<int> alpha(k_count);
  const int base = problem.capacity / k_count;
  for (int i = 0; i < k_count; ++i) alpha[i] = std::min(base, limit(i));
  int remaining = problem.capacity - std::accumulate(alpha.begin(), alpha.end(), 0);

  const Distribution f = CategoryPopularity(library);
  std::vector<int> order(k_count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return f[a] > f[b]; });
  while (remaining > 0) {
    for (int i : order) {
      if (remaining == 0) break;
      if (alpha[i] < limit(i)) {
        ++alpha[i];
        --remaining;
      }
    }
  }
  return alpha;
}

AllocationResult GreedyAllocateFrom(const CacheProblem& problem,
                                    const AllocatorConfig& config,
                                    std::vector<int> start) {
  config.Validate();
  problem.Validate();
  CheckFeasible(problem);
  AllocationEvaluator evaluator(problem, config.weighting);
  const int k_count = problem.library.num_categories();
  if (static_cast<int>(start.size()) != k_count) {
    throw Error(ErrorCode::kInvalidParameter,
                "start allocation needs one share per category");
  }
  for (int i = 0; i < k_count; ++i) {
    if (start[i] < 0 || start[i] > evaluator.ShareLimit(i)) {
      throw Error(ErrorCode::kInvalidParameter,
                  "start share out of range for category " + std::to_string(i));
    }
  }
  if (std::accumulate(start.begin(), start.end(), 0) != problem.capacity) {
    throw Error(ErrorCode::kInvalidParameter,
                "start allocation must fill the cache exactly");
  }

  AllocationResult result;
  std::vector<int> alpha = std::move(start);
  double incumbent = evaluator.Evaluate(alpha, config.objective, config.mode);
  if (k_count > 1) {
    for (int sweep = 0; sweep < config.max_sweeps; ++sweep) {
      const double sweep_start = incumbent;
      for (int u = 0; u < k_count; ++u) {
        for (int v = 0; v < k_count; ++v) {
          if (u == v) continue;
          const PairOutcome outcome = SolvePair(u, v, alpha, config, evaluator);
          if (outcome.objective > incumbent) {
            alpha[u] = outcome.alpha_u;
            alpha[v] = outcome.alpha_v;
            incumbent = outcome.objective;
            result.trace.push_back({u, v, alpha[u], alpha[v], incumbent});
          }
        }
      }
      result.sweeps_used = sweep + 1;
      if (incumbent - sweep_start <= config.convergence_tol) break;
    }
  }
  result.allocation = {alpha, problem.capacity};
  result.policy = evaluator.Policy(alpha);
  result.objective_value = incumbent;
  return result;
}

AllocationResult GreedyAllocate(const CacheProblem& problem,
                                const AllocatorConfig& config) {
  return GreedyAllocateFrom(problem, config, InitialAllocation(problem));
}

BaselineResult BaselineOneShot(const CacheProblem& problem) {
  problem.Validate();
  CheckFeasible(problem);
  const LibraryModel& library = problem.library;
  const int k_count = library.num_categories();
  const Distribution f = CategoryPopularity(library);

  std::vector<double> weights;
  weights.reserve(library.total_contents());
  for (int i = 0; i < k_count; ++i) {
    for (double a : WithinCategoryPopularity(library, i).probs) {
      weights.push_back(f[i] * a);
    }
  }
  const std::vector<double> b =
      OptimalWithinCategory(weights, problem.capacity, problem.network);

  BaselineResult result;
  std::size_t offset = 0;
  for (int i = 0; i < k_count; ++i) {
    const auto first = b.begin() + static_cast<std::ptrdiff_t>(offset);
    const auto last = first + library.sizes[i];
    result.policy.probs.emplace_back(first, last);
    result.shares.push_back(std::accumulate(first, last, 0.0));
    offset += static_cast<std::size_t>(library.sizes[i]);
  }
  const RequestModel request = MakeRequestModel(library, problem.epsilon);
  result.terms = ComputeHitTerms(result.policy, library, problem.network);
  result.hit_paper = ExpectedHitProbability(result.terms, f, request,
                                            ObjectiveMode::kPaperVerbatim);
  result.hit_consistent = ExpectedHitProbability(
      result.terms, f, request, ObjectiveMode::kGenerativeConsistent);
  result.expected_length = ExpectedLength(result.terms, f, request);
  return result;
}

}  // namespace catcache
