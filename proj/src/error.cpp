// Copyright 2026 The moonlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "moonlab/error.hpp"

namespace moonlab {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_spec: return "invalid-spec";
    case ErrorCode::degenerate_dimension: return "degenerate-dimension";
    case ErrorCode::infeasible_marginals: return "infeasible-marginals";
    case ErrorCode::divergence: return "divergence";
    case ErrorCode::dimension_mismatch: return "dimension-mismatch";
    case ErrorCode::empty_group: return "empty-group";
    case ErrorCode::insufficient_points: return "insufficient-points";
    case ErrorCode::rank_deficient: return "rank-deficient";
    case ErrorCode::non_finite_input: return "non-finite-input";
    case ErrorCode::degenerate_population: return "degenerate-population";
    case ErrorCode::empty_group_sample: return "empty-group-sample";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::config: return "config";
    case ErrorCode::missing_inputs: return "missing-inputs";
    case ErrorCode::io: return "io-failure";
  }
  return "unknown";
}

int exit_code(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::config:
    case ErrorCode::invalid_argument:
      return 1;
    case ErrorCode::invalid_spec:
    case ErrorCode::degenerate_dimension:
    case ErrorCode::infeasible_marginals:
      return 2;
    case ErrorCode::divergence:
    case ErrorCode::dimension_mismatch:
      return 3;
    case ErrorCode::empty_group:
    case ErrorCode::insufficient_points:
    case ErrorCode::rank_deficient:
    case ErrorCode::non_finite_input:
    case ErrorCode::degenerate_population:
    case ErrorCode::empty_group_sample:
      return 4;
    case ErrorCode::missing_inputs:
    case ErrorCode::io:
      return 5;
  }
  return 1;
}

void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(to_string(code)) + ": " + what);
}

}  // namespace moonlab
