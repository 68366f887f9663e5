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

#ifndef MOONLAB_CSV_IO_HPP
#define MOONLAB_CSV_IO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "moonlab/datagen.hpp"
#include "moonlab/evaluator.hpp"
#include "moonlab/trainer.hpp"

namespace moonlab {

// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

// %.12g
std::string format_real(double x);
// %.9g, for dataset features.
std::string format_feature(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index by name; throws io-failure if absent.
  std::size_t column(std::string_view name) const;
};

// Minimal RFC 4180: fields with commas, quotes or newlines are quoted.
std::string to_csv(const CsvTable& table);
CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

std::string dataset_csv(const Dataset& data);
Dataset dataset_from_csv(const CsvTable& table, Split split, std::size_t k_groups);

std::string models_csv(const std::vector<ModelRecord>& models);
std::string weights_csv(const std::vector<ModelRecord>& models);
// Joins models.csv and weights.csv rows by model_id.
std::vector<ModelRecord> models_from_csv(const CsvTable& models, const CsvTable& weights);

std::string results_csv(const std::vector<EvalRecord>& records, std::size_t k_groups);
std::vector<EvalRecord> results_from_csv(const CsvTable& table);

struct PredictionRow {
  std::string model_id;
  std::vector<std::uint8_t> bits;
};
std::string preds_csv(const std::vector<PredictionRow>& rows);
std::vector<PredictionRow> preds_from_csv(const CsvTable& table);

// model_a, model_b, agreement, agreement_id, agreement_ood, then one
// column per group.
std::string agreement_csv(const std::vector<AgreementRecord>& records, std::span<const double> r_tr,
                          std::span<const double> r_ts);

}  // namespace moonlab

#endif  // MOONLAB_CSV_IO_HPP
