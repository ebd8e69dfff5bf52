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

// Request-model distributions: category popularity, category rank, the
// Mandelbrot-Zipf law inside a category, and the session-length law.

#ifndef CATCACHE_POPULARITY_H_
#define CATCACHE_POPULARITY_H_

#include <cstddef>
#include <span>
#include <vector>

namespace catcache {

// A probability mass function over 0-based indices.
struct Distribution {
  std::vector<double> probs;

  std::size_t size() const { return probs.size(); }
  double operator[](std::size_t i) const { return probs[i]; }
  std::span<const double> view() const { return probs; }
};

// Element i (0-based) is (i+1)^-gamma, normalized.
Distribution Zipf(int n_items, double gamma);

// Element n (0-based) is (n+1+plateau)^-gamma, normalized.
Distribution MandelbrotZipf(int n_items, double gamma, double plateau);

// The static content universe: K categories with their sizes and the shape
// parameters of every popularity law.
struct LibraryModel {
  std::vector<int> sizes;          // N_i, one per category
  double gamma = 1.0;              // global category skew
  double gamma_out = 5.0;          // category-rank skew
  std::vector<double> gamma_in;    // within-category skew, one per category
  double plateau = 69.0;           // shared Mandelbrot plateau factor

  int num_categories() const { return static_cast<int>(sizes.size()); }
  int total_contents() const;

  // Throws Error(kInvalidParameter) when any field is out of range.
  void Validate() const;
};

// Builds a library whose categories share one within-category exponent.
LibraryModel MakeLibrary(std::vector<int> sizes, double gamma,
                         double gamma_out, double gamma_in, double plateau);

// Zipf(K, gamma). Only used to pick the preferred category of a session.
Distribution CategoryPopularity(const LibraryModel& library);

// Mandelbrot-Zipf popularity of the contents of one category.
Distribution WithinCategoryPopularity(const LibraryModel& library,
                                      int category);

// Per-step request process of a session.
//
// After each consumed content the user quits with probability epsilon;
// otherwise the next request stays in the preferred category with
// probability rank_probs[0] and leaves it otherwise. The *_eff fields are the
// unconditional per-step probabilities, so
//   epsilon + p1_eff + p_out_eff == 1.
struct RequestModel {
  double epsilon = 0.1;
  std::vector<double> rank_probs;
  double p1_eff = 0.0;
  double p_out_eff = 0.0;

  // Pr{R = 1}: probability that a request stays in the preferred category.
  double stay_probability() const { return rank_probs.front(); }
};

RequestModel MakeRequestModel(const LibraryModel& library, double epsilon);

// epsilon * (1 - epsilon)^l, the literal session-length law. Its mass over
// l >= 1 is 1 - epsilon; see GeometricSessionLengthPmf for the normalized
// law the simulator uses.
double SessionLengthPmf(double epsilon, int length);

// epsilon * (1 - epsilon)^(l - 1) for l >= 1, zero otherwise.
double GeometricSessionLengthPmf(double epsilon, int length);

// 1 / (N - N_k): the uniform popularity assumed for every content outside
// the preferred category k. Throws Error(kUndefinedOutside) when K == 1.
double OutsideUniformPopularity(const LibraryModel& library, int preferred);

}  // namespace catcache

#endif  // CATCACHE_POPULARITY_H_
