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

#ifndef MOONLAB_H
#define MOONLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MOONLAB_BUILDING_LIBRARY)
#    define ML_API __declspec(dllexport)
#  else
#    define ML_API __declspec(dllimport)
#  endif
#else
#  define ML_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as process exit codes. */
typedef enum ml_status {
  ML_OK = 0,
  ML_ERR_CONFIG = 1,
  ML_ERR_GENERATION = 2,
  ML_ERR_TRAINING = 3,
  ML_ERR_ANALYSIS = 4,
  ML_ERR_IO = 5
} ml_status;

typedef enum ml_split { ML_SPLIT_TRAIN = 0, ML_SPLIT_ID_TEST = 1, ML_SPLIT_OOD_TEST = 2 } ml_split;

typedef enum ml_format { ML_FORMAT_CSV = 0, ML_FORMAT_JSON = 1 } ml_format;

typedef struct ml_config ml_config;
typedef struct ml_dataset ml_dataset;

ML_API const char* ml_version(void);

/* Message of the last failure on the calling thread ("" if none). */
ML_API const char* ml_last_error(void);

/* Kebab-case name of the last failure's error kind ("" if none). */
ML_API const char* ml_last_error_kind(void);

/* Newline-separated warnings from the last call on this thread ("" if none). */
ML_API const char* ml_last_warnings(void);

ML_API ml_status ml_config_default(ml_config** out);
ML_API ml_status ml_config_load(const char* path, ml_config** out);
ML_API ml_status ml_config_parse(const char* text, ml_config** out);
ML_API void ml_config_free(ml_config* cfg);

/* section may be NULL or "" to search shift, grid, analysis, output. */
ML_API ml_status ml_config_set(ml_config* cfg, const char* section, const char* key, const char* value);
ML_API ml_status ml_config_set_seed(ml_config* cfg, uint64_t seed);
ML_API ml_status ml_config_set_out(ml_config* cfg, const char* dir);
ML_API ml_status ml_config_set_jobs(ml_config* cfg, size_t jobs);
ML_API ml_status ml_config_out_dir(const ml_config* cfg, char* buf, size_t len);

ML_API ml_status ml_gen_data(const ml_config* cfg);
ML_API ml_status ml_run_sweep(const ml_config* cfg);

/* knob: "sdr", "p_maj" or "correlation_level". */
ML_API ml_status ml_run_series(const ml_config* cfg, const char* knob, const double* values, size_t n_values);

/* n_pairs 0 uses the config value; use_seed 0 uses the config pair seed. */
ML_API ml_status ml_run_agreement(const ml_config* cfg, size_t n_pairs, int use_seed, uint64_t pair_seed);

/* compare_dir may be NULL. */
ML_API ml_status ml_analyze(const ml_config* cfg, const char* compare_dir);

/* results_csv and svg_path may be NULL for <out>/results.csv, <out>/plot.svg. */
ML_API ml_status ml_plot(const ml_config* cfg, const char* results_csv, const char* svg_path);

ML_API ml_status ml_theory(const ml_config* cfg, ml_format format);

ML_API ml_status ml_dataset_generate(const ml_config* cfg, ml_split split, ml_dataset** out);
ML_API void ml_dataset_free(ml_dataset* data);
ML_API size_t ml_dataset_rows(const ml_dataset* data);
ML_API size_t ml_dataset_cols(const ml_dataset* data);
/* Copies row i into out[0..cols); label and group may be NULL. */
ML_API ml_status ml_dataset_row(const ml_dataset* data, size_t i, double* out, int* label, uint32_t* group);

ML_API ml_status ml_probit(double p, double eps, double* out);
ML_API ml_status ml_accuracy_gap(double p_y1, double pi1, double pi0, double tpr, double tnr, double* out);
ML_API ml_status ml_subpop_accuracy(double p_y1, double pi1, double pi0, double tpr, double tnr, int z,
                                   double* out);
/* cells[2 * y + z]. */
ML_API ml_status ml_mixture_table(size_t total, double class_balance, double attr_balance, double level,
                                  size_t cells[4]);

#ifdef __cplusplus
}
#endif

#endif /* MOONLAB_H */
