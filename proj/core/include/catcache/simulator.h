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

// Monte Carlo validation of the closed-form session objectives.

#ifndef CATCACHE_SIMULATOR_H_
#define CATCACHE_SIMULATOR_H_

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "catcache/allocator.h"
#include "catcache/network.h"
#include "catcache/placement.h"
#include "catcache/popularity.h"

namespace catcache {

// How the content of an outside-category request is drawn.
//   kExactMandelbrotZipf: category uniform over the K - 1 others, content by
//     that category's Mandelbrot-Zipf law.
//   kUniformApprox: content uniform over all N - N_k outside contents, the
//     law assumed by the closed forms.
enum class OutsidePopularity { kExactMandelbrotZipf, kUniformApprox };

// kPerRequest draws a fresh node field for every request, so requests are
// independent given the placement, as in the closed forms. kPerSession keeps
// one field and one set of node caches for the whole session.
enum class FieldResampling { kPerRequest, kPerSession };

// kEndSession: a missed continuation request ends the session.
// kContinueVoluntary: the session keeps running until the user quits, so the
// request count follows the geometric law whatever the cache state.
enum class MissHandling { kEndSession, kContinueVoluntary };

struct SimConfig {
  std::int64_t n_sessions = 100000;
  std::uint64_t seed = 1;
  NetworkModel network = NetworkModel::PoissonDisk(0.02, 10.0);
  OutsidePopularity outside = OutsidePopularity::kExactMandelbrotZipf;
  bool record_traces = false;
  FieldResampling field = FieldResampling::kPerRequest;
  MissHandling miss_handling = MissHandling::kEndSession;

  void Validate() const;
};

struct NodeField {
  int count = 0;
  std::vector<std::array<double, 2>> positions;  // empty for explicit pmfs
};

// J ~ Poisson(mean_nodes) with positions uniform in the disk, or J drawn
// from the explicit pmf.
NodeField SampleNodeField(const NetworkModel& network, Rng& rng);

// contents[i]: ascending indices of category-i contents held by the node.
struct NodeCache {
  std::vector<std::vector<int>> contents;

  bool Contains(int category, int content) const;
  int size() const;
};

// Each node independently draws exactly alpha_i contents of category i with
// inclusion probabilities policy.probs[i].
std::vector<NodeCache> PopulateCaches(int node_count,
                                      const PlacementPolicy& policy,
                                      const Allocation& allocation, Rng& rng);

struct RequestRecord {
  int category = 0;
  int content = 0;
  bool hit = false;
};

enum class Termination { kVoluntaryQuit, kCacheMiss };

std::string_view TerminationName(Termination termination);

// requests[0] is the opening request; it is always consumed and never ends
// the session. `consumed` counts continuation requests that hit before the
// session stopped (by quitting or by a continuation miss).
struct SessionTrace {
  int preferred = 0;
  std::vector<RequestRecord> requests;
  Termination terminated_by = Termination::kVoluntaryQuit;
  int consumed = 0;

  // Every issued request hit and the user left voluntarily.
  bool all_hit() const;
};

// Samplers shared by every session of one run.
class SessionModel {
 public:
  SessionModel(const LibraryModel& library, double epsilon,
               const PlacementPolicy& policy, OutsidePopularity outside);

  const LibraryModel& library() const { return library_; }
  const RequestModel& request() const { return request_; }
  const PlacementPolicy& policy() const { return policy_; }

  int DrawPreferred(Rng& rng) const;
  RequestRecord DrawRequest(int preferred, Rng& rng) const;

 private:
  LibraryModel library_;
  RequestModel request_;
  PlacementPolicy policy_;
  OutsidePopularity outside_;
  std::vector<double> preferred_cdf_;
  std::vector<std::vector<double>> content_cdf_;
  std::vector<std::vector<double>> outside_category_cdf_;
};

// Runs one session. With `caches` the request hits iff one of those nodes
// holds the content; without, each request sees a fresh node field drawn
// from `network`.
SessionTrace SimulateSession(const SessionModel& model,
                             const NetworkModel& network,
                             MissHandling miss_handling,
                             std::optional<std::span<const NodeCache>> caches,
                             Rng& rng);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
};

struct CategoryStats {
  std::int64_t sessions = 0;
  std::int64_t all_hit_sessions = 0;
  std::int64_t within_requests = 0;
  std::int64_t within_hits = 0;
  std::int64_t outside_requests = 0;
  std::int64_t outside_hits = 0;
};

struct SimReport {
  std::int64_t sessions = 0;
  Estimate all_hit_rate;         // fraction of sessions whose requests all hit
  Estimate mean_length;          // consecutive consumptions per session
  Estimate mean_requests;        // issued requests per session
  Estimate per_request_hit_rate;
  std::vector<double> per_category_hit_rates;  // all-hit rate by preferred k
  std::vector<CategoryStats> per_category;
  std::vector<SessionTrace> traces;            // only with record_traces
};

// Seed of session `index`'s private random stream.
std::uint64_t SessionSeed(std::uint64_t seed, std::uint64_t index);

// Runs config.n_sessions independent sessions; bitwise reproducible from
// config.seed.
SimReport EstimateObjectives(const SimConfig& config,
                             const LibraryModel& library, double epsilon,
                             const Allocation& allocation,
                             const PlacementPolicy& policy);

// One line per session: session_id,preferred,length,all_hit,terminated_by
// with a header row. Categories are 1-based.
void WriteTraceDump(std::ostream& out, std::span<const SessionTrace> traces);

}  // namespace catcache

#endif  // CATCACHE_SIMULATOR_H_
