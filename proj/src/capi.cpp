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

#include "moonlab/moonlab.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "moonlab/analysis.hpp"
#include "moonlab/config.hpp"
#include "moonlab/error.hpp"
#include "moonlab/pipeline.hpp"
#include "moonlab/theory.hpp"

struct ml_config {
  moonlab::ExperimentConfig cfg;
};

struct ml_dataset {
  moonlab::Dataset data;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_kind;
thread_local std::string last_warnings;

template <typename F>
ml_status guarded(F&& f) {
  last_error.clear();
  last_kind.clear();
  last_warnings.clear();
  try {
    f();
    return ML_OK;
  } catch (const moonlab::Error& e) {
    last_error = e.what();
    last_kind = moonlab::to_string(e.code());
    return static_cast<ml_status>(moonlab::exit_code(e.code()));
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    last_kind = "io-failure";
    return ML_ERR_IO;
  } catch (const std::exception& e) {
    last_error = e.what();
    last_kind = "io-failure";
    return ML_ERR_IO;
  }
}

void require(const void* p, const char* what) {
  if (!p) moonlab::fail(moonlab::ErrorCode::invalid_argument, std::string(what) + " is null");
}

}  // namespace

extern "C" {

const char* ml_version(void) { return "0.1.0"; }

const char* ml_last_error(void) { return last_error.c_str(); }

const char* ml_last_error_kind(void) { return last_kind.c_str(); }

const char* ml_last_warnings(void) { return last_warnings.c_str(); }

ml_status ml_config_default(ml_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new ml_config{};
  });
}

ml_status ml_config_load(const char* path, ml_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new ml_config{moonlab::load_config(path)};
  });
}

ml_status ml_config_parse(const char* text, ml_config** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new ml_config{moonlab::parse_config(text)};
  });
}

void ml_config_free(ml_config* cfg) { delete cfg; }

ml_status ml_config_set(ml_config* cfg, const char* section, const char* key, const char* value) {
  return guarded([&] {
    require(cfg, "config");
    require(key, "key");
    require(value, "value");
    moonlab::set_config_value(cfg->cfg, section ? section : "", key, value);
  });
}

ml_status ml_config_set_seed(ml_config* cfg, uint64_t seed) {
  return guarded([&] {
    require(cfg, "config");
    cfg->cfg.master_seed = seed;
  });
}

ml_status ml_config_set_out(ml_config* cfg, const char* dir) {
  return guarded([&] {
    require(cfg, "config");
    require(dir, "dir");
    cfg->cfg.out_dir = dir;
  });
}

ml_status ml_config_set_jobs(ml_config* cfg, size_t jobs) {
  return guarded([&] {
    require(cfg, "config");
    cfg->cfg.jobs = jobs == 0 ? 1 : jobs;
  });
}

ml_status ml_config_out_dir(const ml_config* cfg, char* buf, size_t len) {
  return guarded([&] {
    require(cfg, "config");
    require(buf, "buf");
    const std::string s = cfg->cfg.out_dir.string();
    if (s.size() + 1 > len) moonlab::fail(moonlab::ErrorCode::invalid_argument, "buffer too small");
    std::memcpy(buf, s.c_str(), s.size() + 1);
  });
}

ml_status ml_gen_data(const ml_config* cfg) {
  return guarded([&] {
    require(cfg, "config");
    moonlab::run_gen_data(cfg->cfg);
  });
}

ml_status ml_run_sweep(const ml_config* cfg) {
  return guarded([&] {
    require(cfg, "config");
    moonlab::run_sweep_pipeline(cfg->cfg);
  });
}

ml_status ml_run_series(const ml_config* cfg, const char* knob, const double* values, size_t n_values) {
  return guarded([&] {
    require(cfg, "config");
    require(knob, "knob");
    if (n_values) require(values, "values");
    moonlab::run_spurious_series(cfg->cfg, moonlab::parse_series_knob(knob),
                                 std::vector<double>(values, values + n_values));
  });
}

ml_status ml_run_agreement(const ml_config* cfg, size_t n_pairs, int use_seed, uint64_t pair_seed) {
  return guarded([&] {
    require(cfg, "config");
    const auto& c = cfg->cfg;
    const auto out = moonlab::run_agreement_pipeline(c, n_pairs ? n_pairs : c.analysis.n_pairs,
                                                     use_seed ? pair_seed : c.resolved_pair_seed());
    for (const auto& w : out.warnings) last_warnings += w + "\n";
  });
}

ml_status ml_analyze(const ml_config* cfg, const char* compare_dir) {
  return guarded([&] {
    require(cfg, "config");
    std::optional<std::filesystem::path> cmp;
    if (compare_dir && *compare_dir) cmp = compare_dir;
    moonlab::run_analyze(cfg->cfg, cmp);
  });
}

ml_status ml_plot(const ml_config* cfg, const char* results_csv, const char* svg_path) {
  return guarded([&] {
    require(cfg, "config");
    const auto& c = cfg->cfg;
    moonlab::run_plot(c, results_csv ? std::filesystem::path(results_csv) : c.out_dir / "results.csv",
                      svg_path ? std::filesystem::path(svg_path) : c.out_dir / "plot.svg");
  });
}

ml_status ml_theory(const ml_config* cfg, ml_format format) {
  return guarded([&] {
    require(cfg, "config");
    moonlab::run_theory_pipeline(cfg->cfg, format == ML_FORMAT_JSON);
  });
}

ml_status ml_dataset_generate(const ml_config* cfg, ml_split split, ml_dataset** out) {
  return guarded([&] {
    require(cfg, "config");
    require(out, "out");
    moonlab::Split s = moonlab::Split::train;
    switch (split) {
      case ML_SPLIT_TRAIN: s = moonlab::Split::train; break;
      case ML_SPLIT_ID_TEST: s = moonlab::Split::id_test; break;
      case ML_SPLIT_OOD_TEST: s = moonlab::Split::ood_test; break;
      default: moonlab::fail(moonlab::ErrorCode::invalid_argument, "unknown split");
    }
    *out = new ml_dataset{moonlab::generate(cfg->cfg.resolved_shift(), s)};
  });
}

void ml_dataset_free(ml_dataset* data) { delete data; }

size_t ml_dataset_rows(const ml_dataset* data) { return data ? data->data.rows() : 0; }

size_t ml_dataset_cols(const ml_dataset* data) { return data ? data->data.cols() : 0; }

ml_status ml_dataset_row(const ml_dataset* data, size_t i, double* out, int* label, uint32_t* group) {
  return guarded([&] {
    require(data, "dataset");
    require(out, "out");
    if (i >= data->data.rows()) moonlab::fail(moonlab::ErrorCode::invalid_argument, "row out of range");
    const auto row = data->data.row(i);
    std::memcpy(out, row.data(), row.size() * sizeof(double));
    if (label) *label = data->data.label(i);
    if (group) *group = static_cast<uint32_t>(data->data.group(i));
  });
}

ml_status ml_probit(double p, double eps, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = moonlab::probit(p, eps);
  });
}

ml_status ml_accuracy_gap(double p_y1, double pi1, double pi0, double tpr, double tnr, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = moonlab::accuracy_gap({p_y1, pi1, pi0}, tpr, tnr);
  });
}

ml_status ml_subpop_accuracy(double p_y1, double pi1, double pi0, double tpr, double tnr, int z, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = moonlab::subpop_accuracy({p_y1, pi1, pi0}, tpr, tnr, z);
  });
}

ml_status ml_mixture_table(size_t total, double class_balance, double attr_balance, double level, size_t cells[4]) {
  return guarded([&] {
    require(cells, "cells");
    const auto t = moonlab::mixture_table(total, class_balance, attr_balance, level);
    for (int y = 0; y < 2; ++y) {
      for (int z = 0; z < 2; ++z) cells[2 * y + z] = t.cells[y][z];
    }
  });
}

}  // extern "C"
