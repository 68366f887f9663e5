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

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "moonlab/moonlab.h"

namespace {

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
};

void add_common(CLI::App* app, Common& c, bool config_required) {
  auto* opt = app->add_option("--config", c.config, "Experiment config file");
  if (config_required) opt->required();
  app->add_option("--out", c.out, "Output directory (overrides [output] dir)");
  app->add_option("--seed", c.seed, "Master seed (overrides the config)");
  app->add_option("--jobs", c.jobs, "Worker threads; never changes results")->check(CLI::PositiveNumber);
}

int report(ml_status st) {
  if (st != ML_OK) std::fprintf(stderr, "moonlab: %s: %s\n", ml_last_error_kind(), ml_last_error());
  const char* warnings = ml_last_warnings();
  if (*warnings) std::fprintf(stderr, "moonlab: warning: %s", warnings);
  return static_cast<int>(st);
}

// Loads the config and applies command-line overrides. Null on failure.
ml_config* open_config(const Common& c, int& status) {
  ml_config* cfg = nullptr;
  ml_status st = c.config.empty() ? ml_config_default(&cfg) : ml_config_load(c.config.c_str(), &cfg);
  if (st == ML_OK && !c.out.empty()) st = ml_config_set_out(cfg, c.out.c_str());
  if (st == ML_OK && c.seed) st = ml_config_set_seed(cfg, *c.seed);
  if (st == ML_OK && c.jobs) st = ml_config_set_jobs(cfg, *c.jobs);
  if (st != ML_OK) {
    status = report(st);
    ml_config_free(cfg);
    return nullptr;
  }
  return cfg;
}

void print_out_dir(const ml_config* cfg, const char* what) {
  char buf[4096];
  if (ml_config_out_dir(cfg, buf, sizeof buf) == ML_OK) std::printf("%s written to %s\n", what, buf);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Majority/minority accuracy sweeps under subpopulation shift"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ml_version()));

  Common gen, sweep, analyze, series, agree, theory, plot;

  auto* c_gen = app.add_subcommand("gen-data", "Write train, ID-test and OOD-test CSVs");
  add_common(c_gen, gen, true);

  auto* c_sweep = app.add_subcommand("sweep", "Train the grid, evaluate and fit the curve");
  add_common(c_sweep, sweep, true);

  std::string compare;
  auto* c_analyze = app.add_subcommand("analyze", "Refit results.csv in the output directory");
  add_common(c_analyze, analyze, true);
  c_analyze->add_option("--compare", compare, "Second sweep directory to compare against");

  std::string knob;
  std::vector<double> values;
  auto* c_series = app.add_subcommand("series", "One sweep per knob value");
  add_common(c_series, series, true);
  c_series->add_option("--knob", knob, "sdr | p_maj | correlation_level")
      ->required()
      ->check(CLI::IsMember({"sdr", "p_maj", "correlation_level"}));
  c_series->add_option("--values", values, "Ascending knob values")->required()->delimiter(',');

  std::size_t pairs = 0;
  std::optional<std::uint64_t> pair_seed;
  auto* c_agree = app.add_subcommand("agreement", "Pairwise agreement against accuracy for a finished sweep");
  add_common(c_agree, agree, true);
  c_agree->add_option("--pairs", pairs, "Number of model pairs (default from config)");
  c_agree->add_option("--pair-seed", pair_seed, "Pair sampler seed (default from config)");

  std::string format = "csv";
  auto* c_theory = app.add_subcommand("theory", "Closed-form gap, Monte Carlo check and ROC traversal");
  add_common(c_theory, theory, false);
  c_theory->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

  std::string input, svg;
  auto* c_plot = app.add_subcommand("plot", "Render results.csv as an SVG scatter");
  add_common(c_plot, plot, false);
  c_plot->add_option("--input", input, "results.csv (default <out>/results.csv)");
  c_plot->add_option("--svg", svg, "Output SVG (default <out>/plot.svg)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ML_ERR_CONFIG);
  }

  int status = 0;
  auto run = [&](const Common& c, auto&& body) {
    ml_config* cfg = open_config(c, status);
    if (!cfg) return status;
    status = body(cfg);
    ml_config_free(cfg);
    return status;
  };

  if (*c_gen) {
    return run(gen, [](ml_config* cfg) {
      const int rc = report(ml_gen_data(cfg));
      if (rc == 0) print_out_dir(cfg, "datasets");
      return rc;
    });
  }
  if (*c_sweep) {
    return run(sweep, [](ml_config* cfg) {
      const int rc = report(ml_run_sweep(cfg));
      if (rc == 0) print_out_dir(cfg, "sweep");
      return rc;
    });
  }
  if (*c_analyze) {
    return run(analyze, [&](ml_config* cfg) {
      const int rc = report(ml_analyze(cfg, compare.empty() ? nullptr : compare.c_str()));
      if (rc == 0) print_out_dir(cfg, "analysis.json");
      return rc;
    });
  }
  if (*c_series) {
    return run(series, [&](ml_config* cfg) {
      const int rc = report(ml_run_series(cfg, knob.c_str(), values.data(), values.size()));
      if (rc == 0) print_out_dir(cfg, "series");
      return rc;
    });
  }
  if (*c_agree) {
    return run(agree, [&](ml_config* cfg) {
      const int rc = report(ml_run_agreement(cfg, pairs, pair_seed ? 1 : 0, pair_seed.value_or(0)));
      if (rc == 0) print_out_dir(cfg, "agreement");
      return rc;
    });
  }
  if (*c_theory) {
    return run(theory, [&](ml_config* cfg) {
      const int rc = report(ml_theory(cfg, format == "json" ? ML_FORMAT_JSON : ML_FORMAT_CSV));
      if (rc == 0) print_out_dir(cfg, "theory");
      return rc;
    });
  }
  if (*c_plot) {
    return run(plot, [&](ml_config* cfg) {
      return report(ml_plot(cfg, input.empty() ? nullptr : input.c_str(), svg.empty() ? nullptr : svg.c_str()));
    });
  }
  return 0;
}
