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

// Probabilistic content placement inside one category and the per-request
// hit probabilities it induces.

#ifndef CATCACHE_PLACEMENT_H_
#define CATCACHE_PLACEMENT_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "catcache/network.h"
#include "catcache/popularity.h"

namespace catcache {

using Rng = std::mt19937_64;

// Integer cache share per category; sum(alpha) <= capacity.
struct Allocation {
  std::vector<int> alpha;
  int capacity = 0;

  int total() const;
};

// probs[i][n]: probability that a node caches content n of category i.
// Row i sums to alpha[i].
struct PlacementPolicy {
  std::vector<std::vector<double>> probs;
};

// Maximizes sum_n weights[n] * (1 - E[(1 - b_n)^J]) subject to
// sum_n b_n == budget and 0 <= b_n <= 1.
//
// For the Poisson disk the stationarity condition has the closed form
//   b_n = clamp(ln(weights[n] * mu / nu) / mu, 0, 1)
// and only the multiplier nu is bisected. Other node-count laws bisect nu
// in an outer loop and each b_n in an inner loop on the hit derivative.
// Contents with larger weight never receive a smaller probability.
std::vector<double> OptimalWithinCategory(std::span<const double> weights,
                                          int budget,
                                          const NetworkModel& network);

// 1 - sum_n weights[n] * E[(1 - b_n)^J].
double HitWithin(std::span<const double> b, std::span<const double> weights,
                 const NetworkModel& network);

// Hit probability of a request for a content outside category `preferred`,
// each outside content being equally likely (1 / (N - N_k)).
double HitOutside(const PlacementPolicy& policy, int preferred,
                  const LibraryModel& library, const NetworkModel& network);

// Draws exactly `budget` distinct indices whose inclusion probabilities are
// b. The b_n are laid end to end on [0, budget) and the items covering
// u, u + 1, ..., u + budget - 1 are taken for a single uniform offset u.
// Returned indices are ascending.
std::vector<int> SampleCacheSet(std::span<const double> b, int budget,
                                Rng& rng);

}  // namespace catcache

#endif  // CATCACHE_PLACEMENT_H_
