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

#include "catcache/simulator.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "catcache/errors.h"

namespace catcache {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double Uniform(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

std::vector<double> Cumulative(std::span<const double> weights) {
  std::vector<double> cdf(weights.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    cdf[i] = acc;
  }
  for (double& c : cdf) c /= acc;
  cdf.back() = 1.0;
  return cdf;
}

int DrawIndex(const std::vector<double>& cdf, Rng& rng) {
  const double u = Uniform(rng);
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return static_cast<int>(std::min<std::ptrdiff_t>(
      it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
}

int DrawNodeCount(const NetworkModel& network, Rng& rng) {
  if (network.kind() == NetworkKind::kPoissonDisk) {
    if (network.mean_nodes() <= 0.0) return 0;
    return std::poisson_distribution<int>(network.mean_nodes())(rng);
  }
  const std::vector<double>& pmf = network.node_count_pmf();
  double u = Uniform(rng);
  for (std::size_t j = 0; j < pmf.size(); ++j) {
    if (u < pmf[j]) return static_cast<int>(j);
    u -= pmf[j];
  }
  return static_cast<int>(pmf.size()) - 1;
}

Estimate MeanAndError(double sum, double sum_sq, std::int64_t n) {
  Estimate e;
  if (n <= 0) return e;
  const double nn = static_cast<double>(n);
  e.mean = sum / nn;
  if (n > 1) {
    const double var = std::max(0.0, (sum_sq - nn * e.mean * e.mean) / (nn - 1.0));
    e.std_error = std::sqrt(var / nn);
  }
  return e;
}

}  // namespace

void SimConfig::Validate() const {
  if (n_sessions < 1) {
    throw Error(ErrorCode::kInvalidParameter, "n_sessions must be >= 1");
  }
}

NodeField SampleNodeField(const NetworkModel& network, Rng& rng) {
  NodeField field;
  field.count = DrawNodeCount(network, rng);
  if (network.kind() == NetworkKind::kPoissonDisk) {
    field.positions.reserve(field.count);
    for (int j = 0; j < field.count; ++j) {
      const double r = network.radius() * std::sqrt(Uniform(rng));
      const double theta = 2.0 * std::numbers::pi * Uniform(rng);
      field.positions.push_back({r * std::cos(theta), r * std::sin(theta)});
    }
  }
  return field;
}

bool NodeCache::Contains(int category, int content) const {
  const std::vector<int>& held = contents[category];
  return std::binary_search(held.begin(), held.end(), content);
}

int NodeCache::size() const {
  int n = 0;
  for (const auto& c : contents) n += static_cast<int>(c.size());
  return n;
}

std::vector<NodeCache> PopulateCaches(int node_count,
                                      const PlacementPolicy& policy,
                                      const Allocation& allocation, Rng& rng) {
  if (policy.probs.size() != allocation.alpha.size()) {
    throw Error(ErrorCode::kInvalidParameter,
                "policy and allocation disagree on the category count");
  }
  std::vector<NodeCache> nodes(static_cast<std::size_t>(node_count));
  for (NodeCache& node : nodes) {
    node.contents.reserve(policy.probs.size());
    for (std::size_t i = 0; i < policy.probs.size(); ++i) {
      node.contents.push_back(
          SampleCacheSet(policy.probs[i], allocation.alpha[i], rng));
    }
  }
  return nodes;
}

std::string_view TerminationName(Termination termination) {
  return termination == Termination::kVoluntaryQuit ? "voluntary-quit"
                                                    : "cache-miss";
}

bool SessionTrace::all_hit() const {
  if (terminated_by == Termination::kCacheMiss) return false;
  return std::all_of(requests.begin(), requests.end(),
                     [](const RequestRecord& r) { return r.hit; });
}

SessionModel::SessionModel(const LibraryModel& library, double epsilon,
                           const PlacementPolicy& policy,
                           OutsidePopularity outside)
    : library_(library),
      request_(MakeRequestModel(library, epsilon)),
      policy_(policy),
      outside_(outside) {
  library_.Validate();
  const int k_count = library_.num_categories();
  if (static_cast<int>(policy_.probs.size()) != k_count) {
    throw Error(ErrorCode::kInvalidParameter,
                "policy does not match the library's category count");
  }
  preferred_cdf_ = Cumulative(CategoryPopularity(library_).view());
  for (int i = 0; i < k_count; ++i) {
    content_cdf_.push_back(
        Cumulative(WithinCategoryPopularity(library_, i).view()));
  }
  outside_category_cdf_.resize(k_count);
  if (k_count < 2) return;
  for (int k = 0; k < k_count; ++k) {
    std::vector<double> w(k_count, 0.0);
    for (int i = 0; i < k_count; ++i) {
      if (i == k) continue;
      w[i] = outside_ == OutsidePopularity::kUniformApprox
                 ? static_cast<double>(library_.sizes[i])
                 : 1.0;
    }
    outside_category_cdf_[k] = Cumulative(w);
  }
}

int SessionModel::DrawPreferred(Rng& rng) const {
  return DrawIndex(preferred_cdf_, rng);
}

RequestRecord SessionModel::DrawRequest(int preferred, Rng& rng) const {
  RequestRecord record;
  const bool stays = library_.num_categories() == 1 ||
                     Uniform(rng) < request_.stay_probability();
  if (stays) {
    record.category = preferred;
    record.content = DrawIndex(content_cdf_[preferred], rng);
    return record;
  }
  record.category = DrawIndex(outside_category_cdf_[preferred], rng);
  if (outside_ == OutsidePopularity::kUniformApprox) {
    record.content = std::uniform_int_distribution<int>(
        0, library_.sizes[record.category] - 1)(rng);
  } else {
    record.content = DrawIndex(content_cdf_[record.category], rng);
  }
  return record;
}

SessionTrace SimulateSession(const SessionModel& model,
                             const NetworkModel& network,
                             MissHandling miss_handling,
                             std::optional<std::span<const NodeCache>> caches,
                             Rng& rng) {
  auto is_hit = [&](const RequestRecord& r) {
    if (caches) {
      return std::any_of(caches->begin(), caches->end(),
                         [&](const NodeCache& node) {
                           return node.Contains(r.category, r.content);
                         });
    }
    const double b = model.policy().probs[r.category][r.content];
    const int nodes = DrawNodeCount(network, rng);
    for (int j = 0; j < nodes; ++j) {
      if (Uniform(rng) < b) return true;
    }
    return false;
  };

  SessionTrace trace;
  trace.preferred = model.DrawPreferred(rng);
  RequestRecord opener = model.DrawRequest(trace.preferred, rng);
  opener.hit = is_hit(opener);
  trace.requests.push_back(opener);

  bool missed = false;
  for (;;) {
    if (Uniform(rng) < model.request().epsilon) {
      trace.terminated_by = Termination::kVoluntaryQuit;
      break;
    }
    RequestRecord next = model.DrawRequest(trace.preferred, rng);
    next.hit = is_hit(next);
    trace.requests.push_back(next);
    if (!next.hit) {
      missed = true;
      if (miss_handling == MissHandling::kEndSession) {
        trace.terminated_by = Termination::kCacheMiss;
        break;
      }
    }
    if (!missed) ++trace.consumed;
  }
  return trace;
}

std::uint64_t SessionSeed(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(seed ^ SplitMix64(index));
}

SimReport EstimateObjectives(const SimConfig& config,
                             const LibraryModel& library, double epsilon,
                             const Allocation& allocation,
                             const PlacementPolicy& policy) {
  config.Validate();
  const SessionModel model(library, epsilon, policy, config.outside);
  const int k_count = library.num_categories();

  SimReport report;
  report.sessions = config.n_sessions;
  report.per_category.resize(k_count);
  double hit_sum = 0.0;
  double len_sum = 0.0, len_sq = 0.0;
  double req_sum = 0.0, req_sq = 0.0;
  std::int64_t requests = 0, hits = 0;

  for (std::int64_t s = 0; s < config.n_sessions; ++s) {
    Rng rng(SessionSeed(config.seed, static_cast<std::uint64_t>(s)));
    SessionTrace trace;
    if (config.field == FieldResampling::kPerSession) {
      const NodeField field = SampleNodeField(config.network, rng);
      const std::vector<NodeCache> caches =
          PopulateCaches(field.count, policy, allocation, rng);
      trace = SimulateSession(model, config.network, config.miss_handling,
                              std::span<const NodeCache>(caches), rng);
    } else {
      trace = SimulateSession(model, config.network, config.miss_handling,
                              std::nullopt, rng);
    }

    CategoryStats& stats = report.per_category[trace.preferred];
    ++stats.sessions;
    const bool all_hit = trace.all_hit();
    if (all_hit) {
      ++stats.all_hit_sessions;
      hit_sum += 1.0;
    }
    len_sum += trace.consumed;
    len_sq += static_cast<double>(trace.consumed) * trace.consumed;
    const double n_req = static_cast<double>(trace.requests.size());
    req_sum += n_req;
    req_sq += n_req * n_req;
    for (const RequestRecord& r : trace.requests) {
      ++requests;
      hits += r.hit;
      if (r.category == trace.preferred) {
        ++stats.within_requests;
        stats.within_hits += r.hit;
      } else {
        ++stats.outside_requests;
        stats.outside_hits += r.hit;
      }
    }
    if (config.record_traces) report.traces.push_back(std::move(trace));
  }

  report.all_hit_rate = MeanAndError(hit_sum, hit_sum, config.n_sessions);
  report.mean_length = MeanAndError(len_sum, len_sq, config.n_sessions);
  report.mean_requests = MeanAndError(req_sum, req_sq, config.n_sessions);
  const double hit_frac =
      requests > 0 ? static_cast<double>(hits) / static_cast<double>(requests)
                   : 0.0;
  report.per_request_hit_rate.mean = hit_frac;
  if (requests > 0) {
    report.per_request_hit_rate.std_error =
        std::sqrt(hit_frac * (1.0 - hit_frac) / static_cast<double>(requests));
  }
  for (const CategoryStats& stats : report.per_category) {
    report.per_category_hit_rates.push_back(
        stats.sessions > 0 ? static_cast<double>(stats.all_hit_sessions) /
                                 static_cast<double>(stats.sessions)
                           : 0.0);
  }
  return report;
}

void WriteTraceDump(std::ostream& out, std::span<const SessionTrace> traces) {
  out << "session_id,preferred,length,all_hit,terminated_by\n";
  for (std::size_t s = 0; s < traces.size(); ++s) {
    const SessionTrace& t = traces[s];
    out << s << ',' << t.preferred + 1 << ',' << t.requests.size() << ','
        << (t.all_hit() ? 1 : 0) << ',' << TerminationName(t.terminated_by)
        << '\n';
  }
}

}  // namespace catcache
