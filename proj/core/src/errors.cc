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

#include "catcache/errors.h"

namespace catcache {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParameter:
      return "invalid-parameter";
    case ErrorCode::kUndefinedOutside:
      return "undefined-outside";
    case ErrorCode::kInfeasibleBudget:
      return "infeasible-budget";
    case ErrorCode::kInfeasible:
      return "infeasible";
    case ErrorCode::kInfeasiblePair:
      return "infeasible-pair";
    case ErrorCode::kDivergentSeries:
      return "divergent-series";
    case ErrorCode::kEnumerationTooLarge:
      return "enumeration-too-large";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace catcache
