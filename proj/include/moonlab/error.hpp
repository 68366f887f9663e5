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

#ifndef MOONLAB_ERROR_HPP
#define MOONLAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace moonlab {

enum class ErrorCode {
  invalid_spec,
  degenerate_dimension,
  infeasible_marginals,
  divergence,
  dimension_mismatch,
  empty_group,
  insufficient_points,
  rank_deficient,
  non_finite_input,
  degenerate_population,
  empty_group_sample,
  invalid_argument,
  config,
  missing_inputs,
  io,
};

const char* to_string(ErrorCode code) noexcept;

// Process exit code for a failure: 1 config, 2 generation, 3 training,
// 4 analysis, 5 io.
int exit_code(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace moonlab

#endif  // MOONLAB_ERROR_HPP
