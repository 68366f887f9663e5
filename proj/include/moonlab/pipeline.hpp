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

#ifndef MOONLAB_PIPELINE_HPP
#define MOONLAB_PIPELINE_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "moonlab/analysis.hpp"
#include "moonlab/config.hpp"
#include "moonlab/csv_io.hpp"
#include "moonlab/evaluator.hpp"
#include "moonlab/report.hpp"

namespace moonlab {

// Majority = largest training weight (ties to the higher index), minority =
// smallest (ties to the lower index).
std::size_t majority_group(std::span<const double> r_tr);
std::size_t minority_group(std::span<const double> r_tr);

std::vector<CurvePoint> curve_points(const std::vector<EvalRecord>& evals, std::size_t maj, std::size_t min);

struct MixtureSegment {
  std::string model_a;  // best OOD accuracy
  std::string model_b;  // worst OOD accuracy
  std::vector<double> p;
  std::vector<CurvePoint> exact;
  double exact_max_deviation = 0.0;         // distance from the a-b chord
  std::vector<CurvePoint> sampled;
  double sampled_max_deviation_se = 0.0;    // per-group, in binomial SEs
};

struct SweepOutcome {
  ShiftSpec spec;
  std::vector<ModelRecord> models;
  std::vector<EvalRecord> evals;
  std::vector<PredictionRow> preds;
  std::vector<SweepFailure> failures;
  std::size_t maj_group = 1;
  std::size_t min_group = 0;
  // Absent when the point cloud cannot be fitted (e.g. every model at the
  // same majority accuracy); curve_error then holds the reason.
  std::optional<CurveReport> curve;
  std::string curve_error;
  MixtureSegment mixture;
  Json report;
};

/// Generates data, trains the grid, evaluates on the OOD pool and fits the
/// curves, without touching the filesystem. Fit failures are recorded, not
/// thrown.
SweepOutcome run_sweep(const ExperimentConfig& cfg);

MixtureSegment mixture_segment(const std::vector<ModelRecord>& models, const std::vector<EvalRecord>& evals,
                               const Dataset& test, const ShiftSpec& spec, std::size_t maj, std::size_t min,
                               std::uint64_t seed);

/// run_sweep, then writes train.csv, id_test.csv, ood_test.csv, models.csv,
/// weights.csv, results.csv, preds.csv, report.json and moon.svg under
/// cfg.out_dir. Everything is computed before the first write.
SweepOutcome run_sweep_pipeline(const ExperimentConfig& cfg);

// Writes the three dataset CSVs only.
void run_gen_data(const ExperimentConfig& cfg);

enum class SeriesKnob { sdr, p_maj, correlation_level };
SeriesKnob parse_series_knob(std::string_view text);
std::string_view to_string(SeriesKnob knob) noexcept;

// Copy of cfg with the knob set to value.
ExperimentConfig apply_knob(const ExperimentConfig& cfg, SeriesKnob knob, double value);

struct SeriesOutcome {
  std::vector<double> values;
  std::vector<CurveReport> reports;
  Json summary;
};

/// One sweep per value (ascending) with a shared master seed, written under
/// out_dir/<knob>_<value>/, plus out_dir/series.json.
SeriesOutcome run_spurious_series(const ExperimentConfig& cfg, SeriesKnob knob, const std::vector<double>& values,
                                  bool write = true);

struct AgreementOutcome {
  std::vector<AgreementRecord> records;
  std::vector<CurvePoint> agreement_points;  // (ID-weighted, OOD-weighted)
  std::vector<CurvePoint> accuracy_points;   // (id_acc, ood_acc)
  std::optional<SplineFit> agreement_spline;
  std::optional<SplineFit> accuracy_spline;
  std::vector<std::string> warnings;
  double range_lo = 0.0;
  double range_hi = 0.0;
  double frac_above = 0.0;     // share of the common range with gap >= 0.02
  double max_abs_gap = 0.0;
  double mean_gap = 0.0;
  std::string verdict;
  Json report;
};

/// Agreement vs accuracy on the OOD pool. groups[i] is the group of pool row i.
AgreementOutcome agreement_analysis(const ShiftSpec& spec, const std::vector<EvalRecord>& evals,
                                    const std::vector<PredictionRow>& preds, std::span<const std::uint32_t> groups,
                                    std::size_t n_pairs, std::uint64_t pair_seed, const AnalysisOptions& opts);

/// Reads results.csv and preds.csv from cfg.out_dir (missing-inputs if
/// absent) and writes agreement.csv, agreement.json and agreement.svg.
AgreementOutcome run_agreement_pipeline(const ExperimentConfig& cfg, std::size_t n_pairs, std::uint64_t pair_seed);

// Group of every OOD pool row, in generation order.
std::vector<std::uint32_t> pool_groups(const ShiftSpec& spec, Split split);

/// Refits results.csv in cfg.out_dir into analysis.json; with compare_dir,
/// also compares against that directory's results.
Json run_analyze(const ExperimentConfig& cfg, const std::optional<std::filesystem::path>& compare_dir);

// Scatter of a results.csv with quadratic and spline overlays.
void run_plot(const ExperimentConfig& cfg, const std::filesystem::path& results, const std::filesystem::path& svg);

struct TheoryOutcome {
  Json summary;
  std::vector<RocPoint> roc;
};

TheoryOutcome run_theory(const ExperimentConfig& cfg);
// Writes theory.json and, for csv format, roc.csv (json format embeds rows).
TheoryOutcome run_theory_pipeline(const ExperimentConfig& cfg, bool json_format);

}  // namespace moonlab

#endif  // MOONLAB_PIPELINE_HPP
