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

#include "catcache/popularity.h"

#include <cmath>
#include <numeric>
#include <string>

#include "catcache/errors.h"

namespace catcache {
namespace {

void CheckExponent(double value, const char* name) {
  if (!std::isfinite(value) || value < 0.0) {
    throw Error(ErrorCode::kInvalidParameter,
                std::string(name) + " must be finite and >= 0, got " +
                    std::to_string(value));
  }
}

void CheckProbabilityOpen(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorCode::kInvalidParameter,
                "epsilon must lie in (0, 1), got " + std::to_string(epsilon));
  }
}

Distribution NormalizedPowerLaw(int n_items, double gamma, double offset) {
  if (n_items < 1) {
    throw Error(ErrorCode::kInvalidParameter,
                "distribution needs at least one item");
  }
  Distribution d;
  d.probs.resize(static_cast<std::size_t>(n_items));
  for (int i = 0; i < n_items; ++i) {
    d.probs[i] = std::pow(static_cast<double>(i + 1) + offset, -gamma);
  }
  // Sum smallest terms first.
  double total = 0.0;
  for (int i = n_items - 1; i >= 0; --i) total += d.probs[i];
  for (double& p : d.probs) p /= total;
  return d;
}

}  // namespace

Distribution Zipf(int n_items, double gamma) {
  CheckExponent(gamma, "zipf exponent");
  return NormalizedPowerLaw(n_items, gamma, 0.0);
}

Distribution MandelbrotZipf(int n_items, double gamma, double plateau) {
  CheckExponent(gamma, "mandelbrot-zipf exponent");
  if (!std::isfinite(plateau) || plateau < 0.0) {
    throw Error(ErrorCode::kInvalidParameter,
                "plateau factor must be finite and >= 0");
  }
  return NormalizedPowerLaw(n_items, gamma, plateau);
}

int LibraryModel::total_contents() const {
  return std::accumulate(sizes.begin(), sizes.end(), 0);
}

void LibraryModel::Validate() const {
  if (sizes.empty()) {
    throw Error(ErrorCode::kInvalidParameter, "library has no categories");
  }
  for (int n : sizes) {
    if (n < 1) {
      throw Error(ErrorCode::kInvalidParameter,
                  "every category needs at least one content");
    }
  }
  if (gamma_in.size() != sizes.size()) {
    throw Error(ErrorCode::kInvalidParameter,
                "gamma_in needs one exponent per category");
  }
  CheckExponent(gamma, "gamma");
  CheckExponent(gamma_out, "gamma_out");
  for (double g : gamma_in) CheckExponent(g, "gamma_in");
  CheckExponent(plateau, "plateau");
}

LibraryModel MakeLibrary(std::vector<int> sizes, double gamma,
                         double gamma_out, double gamma_in, double plateau) {
  LibraryModel library;
  library.gamma_in.assign(sizes.size(), gamma_in);
  library.sizes = std::move(sizes);
  library.gamma = gamma;
  library.gamma_out = gamma_out;
  library.plateau = plateau;
  library.Validate();
  return library;
}

Distribution CategoryPopularity(const LibraryModel& library) {
  return Zipf(library.num_categories(), library.gamma);
}

Distribution WithinCategoryPopularity(const LibraryModel& library,
                                      int category) {
  return MandelbrotZipf(library.sizes.at(category),
                        library.gamma_in.at(category), library.plateau);
}

RequestModel MakeRequestModel(const LibraryModel& library, double epsilon) {
  CheckProbabilityOpen(epsilon);
  RequestModel model;
  model.epsilon = epsilon;
  model.rank_probs = Zipf(library.num_categories(), library.gamma_out).probs;
  const double stay = model.rank_probs.front();
  model.p1_eff = (1.0 - epsilon) * stay;
  // Written as a difference so the three probabilities partition exactly.
  model.p_out_eff = (1.0 - epsilon) - model.p1_eff;
  return model;
}

double SessionLengthPmf(double epsilon, int length) {
  CheckProbabilityOpen(epsilon);
  if (length < 0) return 0.0;
  return epsilon * std::pow(1.0 - epsilon, length);
}

double GeometricSessionLengthPmf(double epsilon, int length) {
  CheckProbabilityOpen(epsilon);
  if (length < 1) return 0.0;
  return epsilon * std::pow(1.0 - epsilon, length - 1);
}

double OutsideUniformPopularity(const LibraryModel& library, int preferred) {
  if (library.num_categories() < 2) {
    throw Error(ErrorCode::kUndefinedOutside,
                "no contents outside the only category");
  }
  const int outside = library.total_contents() - library.sizes.at(preferred);
  return 1.0 / static_cast<double>(outside);
}

}  // namespace catcache
