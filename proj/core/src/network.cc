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

#include "catcache/network.h"

#include <cmath>
#include <numbers>
#include <string>

#include "catcache/errors.h"

namespace catcache {
namespace {

constexpr double kTailMass = 1e-12;
constexpr double kPmfTolerance = 1e-10;

}  // namespace

NetworkModel NetworkModel::PoissonDisk(double intensity, double radius) {
  if (!std::isfinite(intensity) || intensity < 0.0) {
    throw Error(ErrorCode::kInvalidParameter,
                "node intensity must be finite and >= 0");
  }
  if (!std::isfinite(radius) || radius <= 0.0) {
    throw Error(ErrorCode::kInvalidParameter, "radius must be positive");
  }
  NetworkModel model;
  model.kind_ = NetworkKind::kPoissonDisk;
  model.intensity_ = intensity;
  model.radius_ = radius;
  model.mean_nodes_ = intensity * std::numbers::pi * radius * radius;
  return model;
}

NetworkModel NetworkModel::ExplicitPmf(std::vector<double> pmf) {
  if (pmf.empty()) {
    throw Error(ErrorCode::kInvalidParameter, "node-count pmf is empty");
  }
  double total = 0.0;
  for (double p : pmf) {
    if (!std::isfinite(p) || p < 0.0) {
      throw Error(ErrorCode::kInvalidParameter,
                  "node-count pmf has a negative or non-finite entry");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kPmfTolerance) {
    throw Error(ErrorCode::kInvalidParameter,
                "node-count pmf sums to " + std::to_string(total));
  }
  // Drop the tail once the remaining mass is negligible.
  std::size_t keep = pmf.size();
  double tail = 0.0;
  while (keep > 1 && tail + pmf[keep - 1] < kTailMass) {
    tail += pmf[keep - 1];
    --keep;
  }
  pmf.resize(keep);

  NetworkModel model;
  model.kind_ = NetworkKind::kExplicitPmf;
  model.radius_ = 1.0;
  model.pmf_ = std::move(pmf);
  double mean = 0.0;
  for (std::size_t j = 0; j < model.pmf_.size(); ++j) {
    mean += static_cast<double>(j) * model.pmf_[j];
  }
  model.mean_nodes_ = mean;
  return model;
}

double NetworkModel::MissFactor(double b) const {
  if (kind_ == NetworkKind::kPoissonDisk) return std::exp(-mean_nodes_ * b);
  // Horner on sum_j p_j x^j.
  const double x = 1.0 - b;
  double acc = 0.0;
  for (auto it = pmf_.rbegin(); it != pmf_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double NetworkModel::HitDerivative(double b) const {
  if (kind_ == NetworkKind::kPoissonDisk) {
    return mean_nodes_ * std::exp(-mean_nodes_ * b);
  }
  const double x = 1.0 - b;
  double acc = 0.0;
  for (std::size_t j = pmf_.size() - 1; j >= 1; --j) {
    acc = acc * x + static_cast<double>(j) * pmf_[j];
  }
  return acc;
}

}  // namespace catcache
