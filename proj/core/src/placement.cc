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

#include "catcache/placement.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "catcache/errors.h"

namespace catcache {
namespace {

constexpr double kBudgetTolerance = 1e-9;
constexpr int kMaxOuterIterations = 200;
constexpr int kMaxInnerIterations = 100;

std::vector<int> DescendingWeightOrder(std::span<const double> weights) {
  std::vector<int> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return weights[a] > weights[b]; });
  return order;
}

// Pushes the residual budget onto the heaviest unsaturated items (or takes
// it from the lightest positive ones) so that sum(b) == budget.
void RepairBudget(std::vector<double>& b, std::span<const double> weights,
                  int budget) {
  const std::vector<int> order = DescendingWeightOrder(weights);
  double residual =
      static_cast<double>(budget) - std::accumulate(b.begin(), b.end(), 0.0);
  if (residual > 0.0) {
    for (int idx : order) {
      const double add = std::min(1.0 - b[idx], residual);
      b[idx] += add;
      residual -= add;
      if (residual <= 0.0) break;
    }
  } else if (residual < 0.0) {
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const double sub = std::min(b[*it], -residual);
      b[*it] -= sub;
      residual += sub;
      if (residual >= 0.0) break;
    }
  }
}

// Used when caching cannot change the hit value (no nodes in reach).
std::vector<double> FillHeaviest(std::span<const double> weights, int budget) {
  std::vector<double> b(weights.size(), 0.0);
  const std::vector<int> order = DescendingWeightOrder(weights);
  for (int i = 0; i < budget; ++i) b[order[i]] = 1.0;
  return b;
}

std::vector<double> SolvePoisson(std::span<const double> weights, int budget,
                                 double mu) {
  const std::size_t n = weights.size();
  // Work with log(nu) so tiny weights and large mu stay representable.
  const double log_mu = std::log(mu);
  double min_log_w = std::numeric_limits<double>::infinity();
  double max_log_w = -std::numeric_limits<double>::infinity();
  std::vector<double> log_w(n);
  for (std::size_t i = 0; i < n; ++i) {
    log_w[i] = weights[i] > 0.0 ? std::log(weights[i])
                                : -std::numeric_limits<double>::infinity();
    if (weights[i] > 0.0) {
      min_log_w = std::min(min_log_w, log_w[i]);
      max_log_w = std::max(max_log_w, log_w[i]);
    }
  }
  std::vector<double> b(n, 0.0);
  auto fill = [&](double log_nu) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = (log_w[i] + log_mu - log_nu) / mu;
      b[i] = std::clamp(v, 0.0, 1.0);
      total += b[i];
    }
    return total;
  };
  // At lo every positive-weight item saturates; at hi none is cached.
  double lo = min_log_w + log_mu - mu;
  double hi = max_log_w + log_mu;
  for (int iter = 0; iter < kMaxOuterIterations; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double total = fill(mid);
    if (std::abs(total - budget) <= kBudgetTolerance) break;
    if (total > budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return b;
}

double InnerProbability(double weight, double nu, const NetworkModel& network) {
  if (weight * network.HitDerivative(0.0) <= nu) return 0.0;
  if (weight * network.HitDerivative(1.0) >= nu) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  for (int iter = 0; iter < kMaxInnerIterations; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (weight * network.HitDerivative(mid) > nu) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> SolveGeneral(std::span<const double> weights, int budget,
                                 const NetworkModel& network) {
  const std::size_t n = weights.size();
  const double max_w = *std::max_element(weights.begin(), weights.end());
  std::vector<double> b(n, 0.0);
  auto fill = [&](double nu) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      b[i] = weights[i] > 0.0 ? InnerProbability(weights[i], nu, network) : 0.0;
      total += b[i];
    }
    return total;
  };
  double lo = 0.0;
  double hi = max_w * network.HitDerivative(0.0);
  for (int iter = 0; iter < kMaxOuterIterations; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double total = fill(mid);
    if (std::abs(total - budget) <= kBudgetTolerance) break;
    if (total > budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return b;
}

}  // namespace

int Allocation::total() const {
  return std::accumulate(alpha.begin(), alpha.end(), 0);
}

std::vector<double> OptimalWithinCategory(std::span<const double> weights,
                                          int budget,
                                          const NetworkModel& network) {
  const int n = static_cast<int>(weights.size());
  if (budget < 0) {
    throw Error(ErrorCode::kInvalidParameter, "negative placement budget");
  }
  if (budget > n) {
    throw Error(ErrorCode::kInfeasibleBudget,
                "budget " + std::to_string(budget) + " exceeds " +
                    std::to_string(n) + " items");
  }
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw Error(ErrorCode::kInvalidParameter,
                  "placement weights must be finite and >= 0");
    }
  }
  if (budget == 0) return std::vector<double>(n, 0.0);
  if (budget == n) return std::vector<double>(n, 1.0);
  if (network.HitDerivative(0.0) <= 0.0) return FillHeaviest(weights, budget);

  const int positive = static_cast<int>(
      std::count_if(weights.begin(), weights.end(),
                    [](double w) { return w > 0.0; }));
  if (budget >= positive) {
    // Every weighted item saturates; the rest of the budget is spread evenly
    // over weightless items, where it cannot change the objective.
    std::vector<double> b(n, 0.0);
    const double spread =
        static_cast<double>(budget - positive) / (n - positive);
    for (int i = 0; i < n; ++i) b[i] = weights[i] > 0.0 ? 1.0 : spread;
    return b;
  }

  std::vector<double> b =
      network.kind() == NetworkKind::kPoissonDisk
          ? SolvePoisson(weights, budget, network.mean_nodes())
          : SolveGeneral(weights, budget, network);
  RepairBudget(b, weights, budget);
  return b;
}

double HitWithin(std::span<const double> b, std::span<const double> weights,
                 const NetworkModel& network) {
  if (b.size() != weights.size()) {
    throw Error(ErrorCode::kInvalidParameter,
                "placement and weight vectors differ in length");
  }
  double miss = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    miss += weights[i] * network.MissFactor(b[i]);
  }
  return std::clamp(1.0 - miss, 0.0, 1.0);
}

double HitOutside(const PlacementPolicy& policy, int preferred,
                  const LibraryModel& library, const NetworkModel& network) {
  const double uniform = OutsideUniformPopularity(library, preferred);
  if (policy.probs.size() != library.sizes.size()) {
    throw Error(ErrorCode::kInvalidParameter,
                "policy does not match the library's category count");
  }
  double miss = 0.0;
  for (int i = 0; i < library.num_categories(); ++i) {
    if (i == preferred) continue;
    for (double b : policy.probs[i]) miss += network.MissFactor(b);
  }
  return std::clamp(1.0 - uniform * miss, 0.0, 1.0);
}

std::vector<int> SampleCacheSet(std::span<const double> b, int budget,
                                Rng& rng) {
  if (budget < 0) {
    throw Error(ErrorCode::kInvalidParameter, "negative sampling budget");
  }
  double total = 0.0;
  for (double p : b) {
    if (!(p >= -1e-12 && p <= 1.0 + 1e-12)) {
      throw Error(ErrorCode::kInvalidParameter,
                  "caching probability outside [0, 1]");
    }
    total += p;
  }
  if (std::abs(total - budget) > kBudgetTolerance) {
    throw Error(ErrorCode::kInvalidParameter,
                "caching probabilities sum to " + std::to_string(total) +
                    ", not the integer budget " + std::to_string(budget));
  }
  std::vector<int> chosen;
  if (budget == 0) return chosen;
  chosen.reserve(budget);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double point = unit(rng);
  double end = 0.0;
  const int n = static_cast<int>(b.size());
  for (int i = 0; i < n && static_cast<int>(chosen.size()) < budget; ++i) {
    end = (i == n - 1) ? static_cast<double>(budget)
                       : end + std::clamp(b[i], 0.0, 1.0);
    // Each item spans at most one unit, so it covers at most one point.
    if (point < end) {
      chosen.push_back(i);
      point += 1.0;
    }
  }
  // Rounding can leave a point uncovered; top up with the likeliest items.
  if (static_cast<int>(chosen.size()) < budget) {
    std::vector<char> taken(n, 0);
    for (int i : chosen) taken[i] = 1;
    for (int i : DescendingWeightOrder(b)) {
      if (static_cast<int>(chosen.size()) == budget) break;
      if (!taken[i]) chosen.push_back(i);
    }
    std::sort(chosen.begin(), chosen.end());
  }
  return chosen;
}

}  // namespace catcache
