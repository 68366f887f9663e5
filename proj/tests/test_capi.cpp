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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "moonlab/moonlab.h"

namespace {

namespace fs = std::filesystem;

TEST(CApi, VersionAndMath) {
  EXPECT_NE(std::strlen(ml_version()), 0u);
  double v = 0;
  ASSERT_EQ(ml_accuracy_gap(0.5, 0.9, 0.3, 0.9, 0.7, &v), ML_OK);
  EXPECT_NEAR(v, 0.125, 1e-12);
  ASSERT_EQ(ml_subpop_accuracy(0.5, 0.9, 0.3, 0.9, 0.7, 1, &v), ML_OK);
  EXPECT_NEAR(v, 0.85, 1e-12);
  ASSERT_EQ(ml_probit(0.5, 1e-3, &v), ML_OK);
  EXPECT_EQ(v, 0.0);
  EXPECT_EQ(ml_accuracy_gap(0.5, 1.0, 1.0, 0.9, 0.7, &v), ML_ERR_ANALYSIS);
  EXPECT_STRNE(ml_last_error(), "");
  EXPECT_STREQ(ml_last_error_kind(), "degenerate-population");
}

TEST(CApi, MixtureTable) {
  size_t cells[4] = {};
  ASSERT_EQ(ml_mixture_table(10000, 0.5, 0.6, 0.0, cells), ML_OK);
  // cells[2y + z]
  EXPECT_EQ(cells[3], 3000u);
  EXPECT_EQ(cells[2], 2000u);
  EXPECT_EQ(cells[1], 3000u);
  EXPECT_EQ(cells[0], 2000u);
  EXPECT_EQ(ml_mixture_table(0, 0.5, 0.6, 0.0, cells), ML_ERR_GENERATION);
}

TEST(CApi, ConfigAndDataset) {
  ml_config* cfg = nullptr;
  ASSERT_EQ(ml_config_parse("[shift]\nd_core = 4\nd_spu = 2\nn_train = 50\n", &cfg), ML_OK);
  ASSERT_EQ(ml_config_set(cfg, "shift", "p_maj", "0.6"), ML_OK);
  EXPECT_EQ(ml_config_set(cfg, "shift", "nope", "1"), ML_ERR_CONFIG);
  ASSERT_EQ(ml_config_set_seed(cfg, 3), ML_OK);
  ml_dataset* data = nullptr;
  ASSERT_EQ(ml_dataset_generate(cfg, ML_SPLIT_TRAIN, &data), ML_OK);
  EXPECT_EQ(ml_dataset_rows(data), 50u);
  EXPECT_EQ(ml_dataset_cols(data), 6u);
  std::vector<double> row(6);
  int label = 0;
  uint32_t group = 9;
  ASSERT_EQ(ml_dataset_row(data, 0, row.data(), &label, &group), ML_OK);
  EXPECT_TRUE(label == 1 || label == -1);
  EXPECT_LT(group, 2u);
  EXPECT_EQ(ml_dataset_row(data, 50, row.data(), &label, &group), ML_ERR_CONFIG);
  ml_dataset_free(data);

  char buf[8];
  ASSERT_EQ(ml_config_set_out(cfg, "/tmp/a/very/long/output/path"), ML_OK);
  EXPECT_EQ(ml_config_out_dir(cfg, buf, sizeof(buf)), ML_ERR_CONFIG);
  ml_config_free(cfg);

  EXPECT_EQ(ml_config_parse("bogus = 1\n", &cfg), ML_ERR_CONFIG);
  EXPECT_EQ(ml_config_load("/nonexistent.cfg", &cfg), ML_ERR_CONFIG);
}

TEST(CApi, TheoryPipeline) {
  ml_config* cfg = nullptr;
  ASSERT_EQ(ml_config_default(&cfg), ML_OK);
  const fs::path out = fs::temp_directory_path() / "moonlab_capi_theory";
  fs::remove_all(out);
  ASSERT_EQ(ml_config_set_out(cfg, out.c_str()), ML_OK);
  ASSERT_EQ(ml_config_set(cfg, "theory", "n_samples", "20000"), ML_OK);
  ASSERT_EQ(ml_theory(cfg, ML_FORMAT_CSV), ML_OK);
  EXPECT_TRUE(fs::exists(out / "theory.json"));
  EXPECT_TRUE(fs::exists(out / "roc.csv"));
  EXPECT_EQ(ml_run_agreement(cfg, 10, 0, 0), ML_ERR_IO);
  ml_config_free(cfg);
}

}  // namespace
