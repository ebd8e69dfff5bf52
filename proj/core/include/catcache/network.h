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

#ifndef CATCACHE_NETWORK_H_
#define CATCACHE_NETWORK_H_

#include <vector>

namespace catcache {

enum class NetworkKind { kPoissonDisk, kExplicitPmf };

// Law of J, the number of caching nodes within reach of a user. Every node
// caches a given content independently with its placement probability b, so
// a request misses with probability E[(1 - b)^J].
class NetworkModel {
 public:
  // Nodes form a Poisson point process of the given intensity and only nodes
  // closer than `radius` count, so J ~ Poisson(intensity * pi * radius^2).
  static NetworkModel PoissonDisk(double intensity, double radius);

  // J follows `pmf` over 0, 1, 2, ...; the pmf must sum to 1 within 1e-10.
  static NetworkModel ExplicitPmf(std::vector<double> pmf);

  NetworkKind kind() const { return kind_; }
  double intensity() const { return intensity_; }
  double radius() const { return radius_; }
  double mean_nodes() const { return mean_nodes_; }

  // Explicit pmf truncated at the first index whose tail mass is < 1e-12.
  // Empty for the Poisson disk.
  const std::vector<double>& node_count_pmf() const { return pmf_; }

  // E[(1 - b)^J].
  double MissFactor(double b) const;

  // d/db of 1 - E[(1 - b)^J], i.e. E[J (1 - b)^(J - 1)]. Non-increasing in b.
  double HitDerivative(double b) const;

 private:
  NetworkKind kind_ = NetworkKind::kPoissonDisk;
  double intensity_ = 0.0;
  double radius_ = 1.0;
  double mean_nodes_ = 0.0;
  std::vector<double> pmf_;
};

}  // namespace catcache

#endif  // CATCACHE_NETWORK_H_
