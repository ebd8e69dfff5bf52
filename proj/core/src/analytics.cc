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

#include "catcache/analytics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "catcache/errors.h"

namespace catcache {
namespace {

constexpr int kMaxEnumerationCategories = 4;
constexpr int kMaxEnumerationLength = 8;

double SessionWeight(double epsilon, int length, ObjectiveMode mode) {
  return mode == ObjectiveMode::kPaperVerbatim
             ? SessionLengthPmf(epsilon, length)
             : GeometricSessionLengthPmf(epsilon, length);
}

double Factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Sums multinomial(l; counts) * prod_r rate[r]^counts[r] over every split of
// `remaining` requests across ranks r >= `rank`.
double SumOverSplits(const std::vector<double>& rate, int rank, int remaining,
                     double coefficient, double product) {
  const int ranks = static_cast<int>(rate.size());
  if (rank == ranks - 1) {
    return coefficient / Factorial(remaining) * product *
           std::pow(rate[rank], remaining);
  }
  double total = 0.0;
  for (int count = 0; count <= remaining; ++count) {
    total += SumOverSplits(rate, rank + 1, remaining - count,
                           coefficient / Factorial(count),
                           product * std::pow(rate[rank], count));
  }
  return total;
}

}  // namespace

std::string_view ObjectiveModeName(ObjectiveMode mode) {
  return mode == ObjectiveMode::kPaperVerbatim ? "paper" : "consistent";
}

HitTerms ComputeHitTerms(const PlacementPolicy& policy,
                         const LibraryModel& library,
                         const NetworkModel& network) {
  const int k_count = library.num_categories();
  if (static_cast<int>(policy.probs.size()) != k_count) {
    throw Error(ErrorCode::kInvalidParameter,
                "policy does not match the library's category count");
  }
  HitTerms terms;
  terms.within.resize(k_count);
  terms.outside.assign(k_count, 0.0);
  std::vector<double> miss_sum(k_count, 0.0);
  for (int i = 0; i < k_count; ++i) {
    const Distribution weights = WithinCategoryPopularity(library, i);
    terms.within[i] = HitWithin(policy.probs[i], weights.view(), network);
    for (double b : policy.probs[i]) miss_sum[i] += network.MissFactor(b);
  }
  if (k_count < 2) return terms;
  const double all_miss = std::accumulate(miss_sum.begin(), miss_sum.end(), 0.0);
  for (int k = 0; k < k_count; ++k) {
    const double miss = (all_miss - miss_sum[k]) * OutsideUniformPopularity(library, k);
    terms.outside[k] = std::clamp(1.0 - miss, 0.0, 1.0);
  }
  return terms;
}

double PerRequestSuccess(int preferred, const HitTerms& terms,
                         const RequestModel& request, ObjectiveMode mode) {
  const double h = terms.within.at(preferred);
  const double q = terms.outside.at(preferred);
  if (mode == ObjectiveMode::kPaperVerbatim) {
    return request.p1_eff * h + request.p_out_eff * q;
  }
  const double stay = request.stay_probability();
  return stay * h + (1.0 - stay) * q;
}

double ExpectedHitProbability(const HitTerms& terms,
                              const Distribution& category_popularity,
                              const RequestModel& request, ObjectiveMode mode) {
  const double eps = request.epsilon;
  double total = 0.0;
  for (std::size_t k = 0; k < category_popularity.size(); ++k) {
    const double x = PerRequestSuccess(static_cast<int>(k), terms, request, mode);
    const double ratio = (1.0 - eps) * x;
    if (ratio >= 1.0) {
      throw Error(ErrorCode::kDivergentSeries,
                  "per-request continuation factor reached 1");
    }
    const double head = mode == ObjectiveMode::kPaperVerbatim ? ratio : x;
    total += category_popularity[k] * eps * head / (1.0 - ratio);
  }
  return total;
}

double StopProbability(int preferred, const HitTerms& terms,
                       const RequestModel& request) {
  return request.epsilon +
         request.p1_eff * (1.0 - terms.within.at(preferred)) +
         request.p_out_eff * (1.0 - terms.outside.at(preferred));
}

double ExpectedLength(const HitTerms& terms,
                      const Distribution& category_popularity,
                      const RequestModel& request) {
  double total = 0.0;
  for (std::size_t k = 0; k < category_popularity.size(); ++k) {
    const double stop = StopProbability(static_cast<int>(k), terms, request);
    if (stop <= 0.0) {
      throw Error(ErrorCode::kDivergentSeries, "stop probability is zero");
    }
    total += category_popularity[k] * (1.0 - stop) / stop;
  }
  return total;
}

double ExactHitProbabilityGivenLength(const PlacementPolicy& policy,
                                      const LibraryModel& library,
                                      const RequestModel& request,
                                      const NetworkModel& network, int length,
                                      ObjectiveMode mode) {
  const int k_count = library.num_categories();
  if (k_count > kMaxEnumerationCategories || length > kMaxEnumerationLength) {
    throw Error(ErrorCode::kEnumerationTooLarge,
                "exact enumeration is limited to K <= 4 and l <= 8");
  }
  if (length < 1) {
    throw Error(ErrorCode::kInvalidParameter, "session length must be >= 1");
  }
  if (static_cast<int>(policy.probs.size()) != k_count) {
    throw Error(ErrorCode::kInvalidParameter,
                "policy does not match the library's category count");
  }
  std::vector<double> category_hit(k_count);
  for (int i = 0; i < k_count; ++i) {
    category_hit[i] = HitWithin(policy.probs[i],
                                WithinCategoryPopularity(library, i).view(),
                                network);
  }
  const double scale =
      mode == ObjectiveMode::kPaperVerbatim ? 1.0 - request.epsilon : 1.0;
  const Distribution f = CategoryPopularity(library);
  const double lfact = Factorial(length);

  double total = 0.0;
  for (int k = 0; k < k_count; ++k) {
    std::vector<int> others;
    for (int i = 0; i < k_count; ++i) {
      if (i != k) others.push_back(i);
    }
    double perm_total = 0.0;
    int perm_count = 0;
    do {
      std::vector<double> rate(k_count);
      rate[0] = scale * request.rank_probs[0] * category_hit[k];
      for (int r = 1; r < k_count; ++r) {
        rate[r] = scale * request.rank_probs[r] * category_hit[others[r - 1]];
      }
      perm_total += lfact * SumOverSplits(rate, 0, length, 1.0, 1.0);
      ++perm_count;
    } while (std::next_permutation(others.begin(), others.end()));
    total += f[k] * perm_total / perm_count;
  }
  return total;
}

double ExactHitProbabilitySmall(const PlacementPolicy& policy,
                                const LibraryModel& library,
                                const RequestModel& request,
                                const NetworkModel& network, int max_length,
                                ObjectiveMode mode) {
  if (library.num_categories() > kMaxEnumerationCategories ||
      max_length > kMaxEnumerationLength) {
    throw Error(ErrorCode::kEnumerationTooLarge,
                "exact enumeration is limited to K <= 4 and l <= 8");
  }
  double total = 0.0;
  for (int l = 1; l <= max_length; ++l) {
    total += SessionWeight(request.epsilon, l, mode) *
             ExactHitProbabilityGivenLength(policy, library, request, network,
                                            l, mode);
  }
  return total;
}

}  // namespace catcache
