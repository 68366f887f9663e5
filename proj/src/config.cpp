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

#include "moonlab/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>

#include "moonlab/csv_io.hpp"
#include "moonlab/error.hpp"

namespace moonlab {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double real(std::string_view key, std::string_view v) {
  const std::string s(v);
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(x)) {
    fail(ErrorCode::config, std::string(key) + ": expected a number, got '" + s + "'");
  }
  return x;
}

std::uint64_t u64(std::string_view key, std::string_view v) {
  std::uint64_t x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (v.empty() || ec != std::errc{} || p != v.data() + v.size()) {
    fail(ErrorCode::config, std::string(key) + ": expected a non-negative integer, got '" + std::string(v) + "'");
  }
  return x;
}

std::vector<std::string_view> split_list(std::string_view v) {
  std::vector<std::string_view> out;
  while (true) {
    const auto c = v.find(',');
    const auto item = trim(v.substr(0, c));
    if (!item.empty()) out.push_back(item);
    if (c == std::string_view::npos) break;
    v.remove_prefix(c + 1);
  }
  return out;
}

std::vector<double> reals(std::string_view key, std::string_view v) {
  std::vector<double> out;
  for (auto item : split_list(v)) out.push_back(real(key, item));
  return out;
}

std::size_t batch(std::string_view key, std::string_view v) { return v == "full" ? 0 : u64(key, v); }

using Setter = std::function<void(ExperimentConfig&, std::string_view, std::string_view)>;
using Section = std::map<std::string, Setter, std::less<>>;

TableInputs& table(ExperimentConfig& c) {
  if (!c.table) c.table.emplace();
  return *c.table;
}

const std::map<std::string, Section, std::less<>>& sections() {
  static const std::map<std::string, Section, std::less<>> s = {
      {"shift",
       {
           {"d_core", [](auto& c, auto k, auto v) { c.shift.d_core = u64(k, v); }},
           {"d_spu", [](auto& c, auto k, auto v) { c.shift.d_spu = u64(k, v); }},
           {"sdr",
            [](auto& c, auto k, auto v) {
              c.shift.d_spu = static_cast<std::size_t>(std::llround(real(k, v) * static_cast<double>(c.shift.d_core)));
            }},
           {"sigma_core", [](auto& c, auto k, auto v) { c.shift.sigma_core = real(k, v); }},
           {"sigma_spu", [](auto& c, auto k, auto v) { c.shift.sigma_spu = real(k, v); }},
           {"n_train", [](auto& c, auto k, auto v) { c.shift.n_train = u64(k, v); }},
           {"p_maj", [](auto& c, auto k, auto v) { c.shift.p_maj = real(k, v); }},
           {"pi1", [](auto& c, auto k, auto v) { c.shift.pi1 = real(k, v); }},
           {"pi0", [](auto& c, auto k, auto v) { c.shift.pi0 = real(k, v); }},
           {"p_y1", [](auto& c, auto k, auto v) { c.shift.p_y1 = real(k, v); }},
           {"n_id_test", [](auto& c, auto k, auto v) { c.shift.n_id_test = u64(k, v); }},
           {"n_ood_test", [](auto& c, auto k, auto v) { c.shift.n_ood_test = u64(k, v); }},
           {"r_tr", [](auto& c, auto k, auto v) { c.shift.r_tr = reals(k, v); }},
           {"r_ts", [](auto& c, auto k, auto v) { c.shift.r_ts = reals(k, v); }},
           {"k_groups", [](auto& c, auto k, auto v) { c.shift.k_groups = u64(k, v); }},
           {"mode",
            [](auto& c, auto, auto v) {
              if (v == "table") {
                table(c);
                c.shift.mode = MixtureMode::correlation;
                return;
              }
              try {
                c.shift.mode = parse_mixture_mode(v);
              } catch (const Error& e) {
                fail(ErrorCode::config, e.what());
              }
            }},
           {"table_total", [](auto& c, auto k, auto v) { table(c).total = u64(k, v); }},
           {"class_balance", [](auto& c, auto k, auto v) { table(c).class_balance = real(k, v); }},
           {"attr_balance", [](auto& c, auto k, auto v) { table(c).attr_balance = real(k, v); }},
           {"correlation_level", [](auto& c, auto k, auto v) { table(c).correlation_level = real(k, v); }},
       }},
      {"grid",
       {
           {"learning_rates", [](auto& c, auto k, auto v) { c.grid.learning_rates = reals(k, v); }},
           {"l2", [](auto& c, auto k, auto v) { c.grid.l2 = reals(k, v); }},
           {"batch_sizes",
            [](auto& c, auto k, auto v) {
              c.grid.batch_sizes.clear();
              for (auto item : split_list(v)) c.grid.batch_sizes.push_back(batch(k, item));
            }},
           {"replicas", [](auto& c, auto k, auto v) { c.grid.replicas = u64(k, v); }},
           {"max_epochs", [](auto& c, auto k, auto v) { c.grid.max_epochs = u64(k, v); }},
           {"snapshot_epochs", [](auto& c, auto k, auto v) { c.grid.snapshot_epochs = reals(k, v); }},
       }},
      {"analysis",
       {
           {"eps", [](auto& c, auto k, auto v) { c.analysis.eps = real(k, v); }},
           {"lambda",
            [](auto& c, auto k, auto v) {
              if (v == "gcv") {
                c.analysis.lambda.reset();
              } else {
                c.analysis.lambda = real(k, v);
              }
            }},
           {"n_pairs", [](auto& c, auto k, auto v) { c.analysis.n_pairs = u64(k, v); }},
           {"pair_seed", [](auto& c, auto k, auto v) { c.analysis.pair_seed = u64(k, v); }},
           {"margin", [](auto& c, auto k, auto v) { c.analysis.margin = real(k, v); }},
           {"curvature_margin", [](auto& c, auto k, auto v) { c.analysis.curvature_margin = real(k, v); }},
       }},
      {"output",
       {
           {"dir", [](auto& c, auto, auto v) { c.out_dir = std::string(v); }},
           {"master_seed", [](auto& c, auto k, auto v) { c.master_seed = u64(k, v); }},
           {"jobs", [](auto& c, auto k, auto v) { c.jobs = u64(k, v); }},
       }},
      {"theory",
       {
           {"p_y1", [](auto& c, auto k, auto v) { c.theory.pop.p_y1 = real(k, v); }},
           {"pi1", [](auto& c, auto k, auto v) { c.theory.pop.pi1 = real(k, v); }},
           {"pi0", [](auto& c, auto k, auto v) { c.theory.pop.pi0 = real(k, v); }},
           {"mu0", [](auto& c, auto k, auto v) { c.theory.score.mu0 = real(k, v); }},
           {"mu1", [](auto& c, auto k, auto v) { c.theory.score.mu1 = real(k, v); }},
           {"s0", [](auto& c, auto k, auto v) { c.theory.score.s0 = real(k, v); }},
           {"s1", [](auto& c, auto k, auto v) { c.theory.score.s1 = real(k, v); }},
           {"n_thresholds", [](auto& c, auto k, auto v) { c.theory.n_thresholds = u64(k, v); }},
           {"n_samples", [](auto& c, auto k, auto v) { c.theory.n_samples = u64(k, v); }},
           {"tpr", [](auto& c, auto k, auto v) { c.theory.tpr = real(k, v); }},
           {"tnr", [](auto& c, auto k, auto v) { c.theory.tnr = real(k, v); }},
       }},
  };
  return s;
}

}  // namespace

void set_config_value(ExperimentConfig& cfg, std::string_view section, std::string_view key, std::string_view value) {
  const auto& all = sections();
  if (!section.empty()) {
    auto s = all.find(section);
    if (s == all.end()) fail(ErrorCode::config, "unknown section [" + std::string(section) + "]");
    auto k = s->second.find(key);
    if (k == s->second.end()) {
      fail(ErrorCode::config, "unknown key '" + std::string(key) + "' in [" + std::string(section) + "]");
    }
    k->second(cfg, key, value);
    return;
  }
  for (const char* name : {"shift", "grid", "analysis", "output"}) {
    const auto& s = all.at(name);
    auto k = s.find(key);
    if (k != s.end()) {
      k->second(cfg, key, value);
      return;
    }
  }
  fail(ErrorCode::config, "unknown key '" + std::string(key) + "'");
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::string section;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    const auto hash = line.find_first_of("#;");
    line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(ErrorCode::config, "line " + std::to_string(line_no) + ": bad section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!sections().contains(section)) {
        fail(ErrorCode::config, "line " + std::to_string(line_no) + ": unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(ErrorCode::config, "line " + std::to_string(line_no) + ": expected key = value");
    set_config_value(cfg, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    fail(ErrorCode::config, e.what());
  }
  return parse_config(text);
}

ShiftSpec ExperimentConfig::resolved_shift() const {
  ShiftSpec s = shift;
  s.master_seed = master_seed;
  if (table) {
    const MixtureTable t = mixture_table(table->total, table->class_balance, table->attr_balance,
                                         table->correlation_level);
    NoiseParams np;
    np.d_core = s.d_core;
    np.d_spu = s.d_spu;
    np.sigma_core = s.sigma_core;
    np.sigma_spu = s.sigma_spu;
    np.n_id_test = s.n_id_test;
    np.n_ood_test = s.n_ood_test;
    np.master_seed = master_seed;
    ShiftSpec from_table = spec_from_table(t, np);
    from_table.r_ts = s.r_ts;
    s = from_table;
  }
  return normalized(s);
}

std::vector<HyperParams> ExperimentConfig::resolved_grid() const {
  GridOptions g = grid;
  g.master_seed = master_seed;
  return build_grid(g);
}

}  // namespace moonlab
