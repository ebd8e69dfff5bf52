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

#ifndef CATCACHE_ERRORS_H_
#define CATCACHE_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace catcache {

enum class ErrorCode {
  kInvalidParameter,
  kUndefinedOutside,     // outside-category quantity requested with K == 1
  kInfeasibleBudget,     // placement budget exceeds the number of items
  kInfeasible,           // library cannot fill the cache
  kInfeasiblePair,       // empty scan range in a pair subproblem
  kDivergentSeries,
  kEnumerationTooLarge,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace catcache

#endif  // CATCACHE_ERRORS_H_
