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

#include "moonlab/csv_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <unistd.h>

#include "moonlab/error.hpp"

namespace moonlab {

namespace fs = std::filesystem;

namespace {

double parse_real(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) fail(ErrorCode::io, "bad number '" + s + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& s) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) fail(ErrorCode::io, "bad integer '" + s + "'");
  return v;
}

std::string batch_text(std::size_t b) { return b == 0 ? "full" : std::to_string(b); }

std::size_t parse_batch(const std::string& s) { return s == "full" ? 0 : parse_u64(s); }

bool needs_quotes(std::string_view f) { return f.find_first_of(",\"\n\r") != std::string_view::npos; }

void append_field(std::string& out, std::string_view f) {
  if (!needs_quotes(f)) {
    out.append(f);
    return;
  }
  out.push_back('"');
  for (char c : f) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

void append_row(std::string& out, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out.push_back(',');
    append_field(out, row[i]);
  }
  out.push_back('\n');
}

}  // namespace

void write_file_atomic(const fs::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  fs::path tmp = path;
  tmp += ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) fail(ErrorCode::io, "cannot open " + tmp.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) {
      f.close();
      fs::remove(tmp, ec);
      fail(ErrorCode::io, "write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(ErrorCode::io, "cannot rename into " + path.string());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string format_feature(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  fail(ErrorCode::io, "missing column '" + std::string(name) + "'");
}

std::string to_csv(const CsvTable& table) {
  std::string out;
  append_row(out, table.header);
  for (const auto& r : table.rows) append_row(out, r);
  return out;
}

CsvTable parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else {
      field.push_back(c);
      any = true;
    }
  }
  if (quoted) fail(ErrorCode::io, "unterminated quoted field");
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(ErrorCode::io, "empty csv");
  CsvTable t;
  t.header = std::move(rows.front());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != t.header.size()) {
      fail(ErrorCode::io, "csv row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) + " fields");
    }
    t.rows.push_back(std::move(rows[i]));
  }
  return t;
}

CsvTable read_csv(const fs::path& path) { return parse_csv(read_file(path)); }

std::string dataset_csv(const Dataset& data) {
  std::string out = "y,z";
  for (std::size_t j = 0; j < data.cols(); ++j) out += ",x" + std::to_string(j);
  out.push_back('\n');
  out.reserve(out.size() + data.rows() * data.cols() * 14);
  for (std::size_t i = 0; i < data.rows(); ++i) {
    out += data.label(i) > 0 ? "1" : "-1";
    out.push_back(',');
    out += std::to_string(data.group(i));
    for (double v : data.row(i)) {
      out.push_back(',');
      out += format_feature(v);
    }
    out.push_back('\n');
  }
  return out;
}

Dataset dataset_from_csv(const CsvTable& table, Split split, std::size_t k_groups) {
  if (table.header.size() < 2 || table.header[0] != "y" || table.header[1] != "z") {
    fail(ErrorCode::io, "dataset csv must start with y,z");
  }
  const std::size_t cols = table.header.size() - 2;
  Dataset d(table.rows.size(), cols, split, k_groups);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    const double y = parse_real(r[0]);
    if (y != 1.0 && y != -1.0) fail(ErrorCode::io, "label must be -1 or 1");
    const std::uint64_t g = parse_u64(r[1]);
    if (g >= k_groups) fail(ErrorCode::io, "group index out of range");
    d.set_label(i, static_cast<int>(y));
    d.set_group(i, g);
    auto row = d.row(i);
    for (std::size_t j = 0; j < cols; ++j) row[j] = parse_real(r[j + 2]);
  }
  return d;
}

std::string models_csv(const std::vector<ModelRecord>& models) {
  CsvTable t;
  t.header = {"model_id", "epoch", "lr", "l2", "batch_size", "seed", "max_epochs", "train_loss", "bias"};
  for (const auto& m : models) {
    const auto& hp = m.hyperparams;
    t.rows.push_back({m.model_id, format_real(m.epoch), format_real(hp.learning_rate), format_real(hp.l2),
                      batch_text(hp.batch_size), std::to_string(hp.seed), std::to_string(hp.max_epochs),
                      format_real(m.train_loss), format_real(m.bias)});
  }
  return to_csv(t);
}

std::string weights_csv(const std::vector<ModelRecord>& models) {
  CsvTable t;
  t.header = {"model_id"};
  const std::size_t d = models.empty() ? 0 : models.front().weights.size();
  for (std::size_t j = 0; j < d; ++j) t.header.push_back("w" + std::to_string(j));
  for (const auto& m : models) {
    if (m.weights.size() != d) fail(ErrorCode::dimension_mismatch, "models differ in width");
    std::vector<std::string> r{m.model_id};
    for (double w : m.weights) r.push_back(format_real(w));
    t.rows.push_back(std::move(r));
  }
  return to_csv(t);
}

std::vector<ModelRecord> models_from_csv(const CsvTable& models, const CsvTable& weights) {
  std::unordered_map<std::string, const std::vector<std::string>*> by_id;
  for (const auto& r : weights.rows) by_id[r[0]] = &r;
  const std::size_t c_id = models.column("model_id"), c_ep = models.column("epoch"), c_lr = models.column("lr"),
                    c_l2 = models.column("l2"), c_b = models.column("batch_size"), c_s = models.column("seed"),
                    c_me = models.column("max_epochs"), c_loss = models.column("train_loss"),
                    c_bias = models.column("bias");
  std::vector<ModelRecord> out;
  for (const auto& r : models.rows) {
    ModelRecord m;
    m.model_id = r[c_id];
    m.epoch = parse_real(r[c_ep]);
    m.hyperparams.learning_rate = parse_real(r[c_lr]);
    m.hyperparams.l2 = parse_real(r[c_l2]);
    m.hyperparams.batch_size = parse_batch(r[c_b]);
    m.hyperparams.seed = parse_u64(r[c_s]);
    m.hyperparams.max_epochs = parse_u64(r[c_me]);
    m.hyperparams.snapshot_epochs = {m.epoch};
    m.train_loss = parse_real(r[c_loss]);
    m.bias = parse_real(r[c_bias]);
    auto it = by_id.find(m.model_id);
    if (it == by_id.end()) fail(ErrorCode::missing_inputs, "no weights for " + m.model_id);
    for (std::size_t j = 1; j < it->second->size(); ++j) m.weights.push_back(parse_real((*it->second)[j]));
    out.push_back(std::move(m));
  }
  return out;
}

std::string results_csv(const std::vector<EvalRecord>& records, std::size_t k) {
  CsvTable t;
  t.header = {"model_id", "epoch", "lr", "l2", "batch_size", "seed"};
  for (const char* p : {"group_acc_", "tpr_", "tnr_"}) {
    for (std::size_t g = 0; g < k; ++g) t.header.push_back(p + std::to_string(g));
  }
  t.header.push_back("id_acc");
  t.header.push_back("ood_acc");
  for (const auto& e : records) {
    const auto& hp = e.hyperparams;
    std::vector<std::string> r{e.model_id, format_real(e.epoch), format_real(hp.learning_rate), format_real(hp.l2),
                               batch_text(hp.batch_size), std::to_string(hp.seed)};
    for (const auto* v : {&e.group_acc, &e.tpr, &e.tnr}) {
      if (v->size() != k) fail(ErrorCode::dimension_mismatch, "record has wrong group count");
      for (double x : *v) r.push_back(format_real(x));
    }
    r.push_back(format_real(e.id_acc));
    r.push_back(format_real(e.ood_acc));
    t.rows.push_back(std::move(r));
  }
  return to_csv(t);
}

std::vector<EvalRecord> results_from_csv(const CsvTable& table) {
  std::size_t k = 0;
  while (true) {
    bool found = false;
    for (const auto& h : table.header) found = found || h == "group_acc_" + std::to_string(k);
    if (!found) break;
    ++k;
  }
  if (k == 0) fail(ErrorCode::io, "results csv has no group columns");
  const std::size_t c_id = table.column("model_id"), c_ep = table.column("epoch"), c_lr = table.column("lr"),
                    c_l2 = table.column("l2"), c_b = table.column("batch_size"), c_s = table.column("seed"),
                    c_id_acc = table.column("id_acc"), c_ood = table.column("ood_acc");
  std::vector<EvalRecord> out;
  for (const auto& r : table.rows) {
    EvalRecord e;
    e.model_id = r[c_id];
    e.epoch = parse_real(r[c_ep]);
    e.hyperparams.learning_rate = parse_real(r[c_lr]);
    e.hyperparams.l2 = parse_real(r[c_l2]);
    e.hyperparams.batch_size = parse_batch(r[c_b]);
    e.hyperparams.seed = parse_u64(r[c_s]);
    for (std::size_t g = 0; g < k; ++g) {
      e.group_acc.push_back(parse_real(r[table.column("group_acc_" + std::to_string(g))]));
      e.tpr.push_back(parse_real(r[table.column("tpr_" + std::to_string(g))]));
      e.tnr.push_back(parse_real(r[table.column("tnr_" + std::to_string(g))]));
    }
    e.id_acc = parse_real(r[c_id_acc]);
    e.ood_acc = parse_real(r[c_ood]);
    out.push_back(std::move(e));
  }
  return out;
}

std::string preds_csv(const std::vector<PredictionRow>& rows) {
  std::string out = "model_id,bits\n";
  for (const auto& p : rows) {
    append_field(out, p.model_id);
    out.push_back(',');
    for (auto b : p.bits) out.push_back(b ? '1' : '0');
    out.push_back('\n');
  }
  return out;
}

std::vector<PredictionRow> preds_from_csv(const CsvTable& table) {
  const std::size_t c_id = table.column("model_id"), c_bits = table.column("bits");
  std::vector<PredictionRow> out;
  for (const auto& r : table.rows) {
    PredictionRow p;
    p.model_id = r[c_id];
    p.bits.reserve(r[c_bits].size());
    for (char c : r[c_bits]) {
      if (c != '0' && c != '1') fail(ErrorCode::io, "prediction bits must be 0 or 1");
      p.bits.push_back(c == '1' ? 1 : 0);
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::string agreement_csv(const std::vector<AgreementRecord>& records, std::span<const double> r_tr,
                          std::span<const double> r_ts) {
  CsvTable t;
  t.header = {"model_a", "model_b", "agreement", "agreement_id", "agreement_ood"};
  for (std::size_t g = 0; g < r_tr.size(); ++g) t.header.push_back("agreement_" + std::to_string(g));
  for (const auto& a : records) {
    std::vector<std::string> r{a.model_a, a.model_b, format_real(a.agreement),
                               format_real(mixture_value(a.group_agreement, r_tr)),
                               format_real(mixture_value(a.group_agreement, r_ts))};
    for (double v : a.group_agreement) r.push_back(format_real(v));
    t.rows.push_back(std::move(r));
  }
  return to_csv(t);
}

}  // namespace moonlab
