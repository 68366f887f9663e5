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

#ifndef MOONLAB_CONFIG_HPP
#define MOONLAB_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "moonlab/datagen.hpp"
#include "moonlab/theory.hpp"
#include "moonlab/trainer.hpp"

namespace moonlab {

// Training-set cell counts from fixed marginals instead of pi1/pi0.
struct TableInputs {
  std::size_t total = 3000;
  double class_balance = 0.5;
  double attr_balance = 0.6;
  double correlation_level = 1.0;
};

struct AnalysisOptions {
  double eps = 1e-3;
  std::optional<double> lambda;
  std::size_t n_pairs = 500;
  std::optional<std::uint64_t> pair_seed;  // defaults to the master seed
  double margin = 0.02;
  double curvature_margin = 0.1;
};

struct TheoryOptions {
  PopulationSpec pop{0.5, 0.9, 0.3};
  ScoreModel score;
  std::size_t n_thresholds = 101;
  std::uint64_t n_samples = 1000000;
  double tpr = 0.9;
  double tnr = 0.7;
};

struct ExperimentConfig {
  ShiftSpec shift;
  std::optional<TableInputs> table;
  GridOptions grid = default_grid_options();
  AnalysisOptions analysis;
  TheoryOptions theory;
  std::filesystem::path out_dir = "out";
  std::uint64_t master_seed = 1;
  std::size_t jobs = 1;

  // Shift spec with the table inputs (if any) applied and the master seed
  // propagated, validated.
  ShiftSpec resolved_shift() const;
  std::vector<HyperParams> resolved_grid() const;
  std::uint64_t resolved_pair_seed() const { return analysis.pair_seed.value_or(master_seed); }
};

/// key = value lines under [shift], [grid], [analysis], [output] and
/// [theory] headers; '#' and ';' start comments. Keys before any header are
/// looked up in shift, grid, analysis, output in that order. Lists are
/// comma-separated. Throws config on unknown keys or bad values.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Applies one key=value as if it appeared under `section` (empty: any).
void set_config_value(ExperimentConfig& cfg, std::string_view section, std::string_view key, std::string_view value);

}  // namespace moonlab

#endif  // MOONLAB_CONFIG_HPP
