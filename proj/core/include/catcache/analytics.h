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

// Closed-form session objectives: the all-requests hit probability, the
// per-category stop probability and the expected number of consecutive
// consumptions.

#ifndef CATCACHE_ANALYTICS_H_
#define CATCACHE_ANALYTICS_H_

#include <string_view>
#include <vector>

#include "catcache/network.h"
#include "catcache/placement.h"
#include "catcache/popularity.h"

namespace catcache {

// kPaperVerbatim weights l-request sessions by epsilon * (1 - epsilon)^l and
// each request by p1_eff / p_out_eff. kGenerativeConsistent weights sessions
// by the normalized geometric law on l >= 1 and each request by the rank
// probabilities, which is what the simulator generates.
enum class ObjectiveMode { kPaperVerbatim, kGenerativeConsistent };

std::string_view ObjectiveModeName(ObjectiveMode mode);

// within[k]: hit probability of a request inside preferred category k.
// outside[k]: hit probability of a request outside it (uniform contents).
struct HitTerms {
  std::vector<double> within;
  std::vector<double> outside;
};

// Evaluates h_k against the category's Mandelbrot-Zipf weights and q_k with
// the uniform outside approximation. q_k is 0 when K == 1; it never carries
// weight there.
HitTerms ComputeHitTerms(const PlacementPolicy& policy,
                         const LibraryModel& library,
                         const NetworkModel& network);

// Probability that one request of a preferred-k session is issued and hits.
double PerRequestSuccess(int preferred, const HitTerms& terms,
                         const RequestModel& request, ObjectiveMode mode);

// Sum over k of f_k * sum_l Pr{L = l} * X_k^l, in closed form.
double ExpectedHitProbability(const HitTerms& terms,
                              const Distribution& category_popularity,
                              const RequestModel& request, ObjectiveMode mode);

// epsilon + p1_eff (1 - h_k) + p_out_eff (1 - q_k).
double StopProbability(int preferred, const HitTerms& terms,
                       const RequestModel& request);

// sum_k f_k (1 - p_stop^k) / p_stop^k. Never exceeds 1/epsilon - 1.
double ExpectedLength(const HitTerms& terms,
                      const Distribution& category_popularity,
                      const RequestModel& request);

// Exact hit probability of an l-request session without the uniform outside
// approximation: every split of the l requests over the category ranks is
// enumerated, non-preferred categories are assigned to ranks 2..K by every
// permutation with equal weight, and contents are weighted by their own
// Mandelbrot-Zipf law. Limited to K <= 4 and l <= 8.
double ExactHitProbabilityGivenLength(const PlacementPolicy& policy,
                                      const LibraryModel& library,
                                      const RequestModel& request,
                                      const NetworkModel& network, int length,
                                      ObjectiveMode mode);

// sum_{l=1..max_length} Pr{L = l} * ExactHitProbabilityGivenLength(l).
double ExactHitProbabilitySmall(const PlacementPolicy& policy,
                                const LibraryModel& library,
                                const RequestModel& request,
                                const NetworkModel& network, int max_length,
                                ObjectiveMode mode);

}  // namespace catcache

#endif  // CATCACHE_ANALYTICS_H_
