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

#include "moonlab/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "moonlab/error.hpp"
#include "moonlab/rng.hpp"

namespace moonlab {

namespace {

constexpr double kWeightTolerance = 1e-12;

std::size_t round_count(double x) {
  return static_cast<std::size_t>(std::llround(x));
}

std::uint64_t split_salt(Split split) {
  switch (split) {
    case Split::train: return 0x747261696eULL;
    case Split::id_test: return 0x69645f74657374ULL;
    case Split::ood_test: return 0x6f6f645f74657374ULL;
  }
  return 0;
}

void check_weights(const std::vector<double>& w, std::size_t k, const char* name) {
  std::ostringstream msg;
  if (w.size() != k) {
    msg << name << " has " << w.size() << " entries, expected k_groups = " << k;
    fail(ErrorCode::invalid_spec, msg.str());
  }
  double sum = 0.0;
  for (double v : w) {
    if (!(v >= 0.0 && v <= 1.0)) {
      msg << name << " entry " << v << " outside [0, 1]";
      fail(ErrorCode::invalid_spec, msg.str());
    }
    sum += v;
  }
  if (std::fabs(sum - 1.0) > kWeightTolerance) {
    msg << name << " sums to " << sum << ", not 1";
    fail(ErrorCode::invalid_spec, msg.str());
  }
}

void check_open_unit(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) fail(ErrorCode::invalid_spec, std::string(name) + " must lie in (0, 1)");
}

void check_closed_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) fail(ErrorCode::invalid_spec, std::string(name) + " must lie in [0, 1]");
}

void check_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorCode::invalid_spec, std::string(name) + " must be positive and finite");
}

// Training counts before any derived field is known.
GroupPlan raw_train_plan(const ShiftSpec& spec) {
  GroupPlan plan;
  plan.counts.assign(spec.k_groups, {0, 0});
  const std::size_t n = spec.n_train;
  if (spec.mode == MixtureMode::correlation) {
    const std::size_t n_pos = round_count(spec.p_y1 * static_cast<double>(n));
    const std::size_t n_neg = n - n_pos;
    const std::size_t pos_attr = round_count(spec.pi1 * static_cast<double>(n_pos));
    const std::size_t neg_attr = round_count(spec.pi0 * static_cast<double>(n_neg));
    plan.counts[1] = {neg_attr, pos_attr};
    plan.counts[0] = {n_neg - neg_attr, n_pos - pos_attr};
    return plan;
  }
  std::vector<std::size_t> sizes;
  if (spec.k_groups == 2) {
    const std::size_t n_maj = round_count(spec.p_maj * static_cast<double>(n));
    sizes = {n - n_maj, n_maj};
  } else {
    sizes = apportion(n, spec.r_tr);
  }
  for (std::size_t g = 0; g < sizes.size(); ++g) {
    const std::size_t pos = round_count(spec.p_y1 * static_cast<double>(sizes[g]));
    plan.counts[g] = {sizes[g] - pos, pos};
  }
  return plan;
}

}  // namespace

std::string_view to_string(MixtureMode mode) noexcept {
  return mode == MixtureMode::groups ? "groups" : "correlation";
}

std::string_view to_string(Split split) noexcept {
  switch (split) {
    case Split::train: return "train";
    case Split::id_test: return "id_test";
    case Split::ood_test: return "ood_test";
  }
  return "train";
}

MixtureMode parse_mixture_mode(std::string_view text) {
  if (text == "groups") return MixtureMode::groups;
  if (text == "correlation") return MixtureMode::correlation;
  fail(ErrorCode::invalid_spec, "unknown mixture_mode '" + std::string(text) + "'");
}

Split parse_split(std::string_view text) {
  if (text == "train") return Split::train;
  if (text == "id_test") return Split::id_test;
  if (text == "ood_test") return Split::ood_test;
  fail(ErrorCode::invalid_argument, "unknown split '" + std::string(text) + "'");
}

std::size_t GroupPlan::total() const noexcept {
  std::size_t n = 0;
  for (const auto& c : counts) n += c[0] + c[1];
  return n;
}

double group_alignment(std::size_t group, std::size_t k_groups) noexcept {
  if (k_groups < 2) return 1.0;
  return -1.0 + 2.0 * static_cast<double>(group) / static_cast<double>(k_groups - 1);
}

std::vector<std::size_t> apportion(std::size_t total, std::span<const double> weights) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<std::size_t> out(weights.size(), 0);
  if (weights.empty() || !(sum > 0.0)) return out;
  std::vector<double> remainder(weights.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double exact = static_cast<double>(total) * weights[i] / sum;
    out[i] = static_cast<std::size_t>(std::floor(exact));
    remainder[i] = exact - static_cast<double>(out[i]);
    assigned += out[i];
  }
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; assigned < total; ++i, ++assigned) ++out[order[i % order.size()]];
  return out;
}

ShiftSpec normalized(const ShiftSpec& input) {
  ShiftSpec spec = input;
  if (spec.d_core == 0) fail(ErrorCode::degenerate_dimension, "d_core must be positive");
  check_positive(spec.sigma_core, "sigma_core");
  check_positive(spec.sigma_spu, "sigma_spu");
  if (spec.n_train == 0) fail(ErrorCode::invalid_spec, "n_train must be positive");
  if (spec.n_id_test == 0 || spec.n_ood_test == 0) fail(ErrorCode::invalid_spec, "test sizes must be positive");
  if (spec.k_groups < 2) fail(ErrorCode::invalid_spec, "k_groups must be at least 2");
  check_open_unit(spec.p_y1, "p_y1");

  std::vector<double> derived_tr;
  if (spec.mode == MixtureMode::correlation) {
    if (spec.k_groups != 2) fail(ErrorCode::invalid_spec, "correlation mode requires k_groups = 2");
    check_closed_unit(spec.pi1, "pi1");
    check_closed_unit(spec.pi0, "pi0");
    const double p_z1 = spec.pi1 * spec.p_y1 + spec.pi0 * (1.0 - spec.p_y1);
    if (!(p_z1 > 0.0 && p_z1 < 1.0)) fail(ErrorCode::invalid_spec, "P(Z=1) must lie in (0, 1)");
    const GroupPlan plan = raw_train_plan(spec);
    const double n = static_cast<double>(spec.n_train);
    derived_tr = {static_cast<double>(plan.group_size(0)) / n, static_cast<double>(plan.group_size(1)) / n};
  } else if (spec.k_groups == 2) {
    check_open_unit(spec.p_maj, "p_maj");
    derived_tr = {1.0 - spec.p_maj, spec.p_maj};
  }

  if (!derived_tr.empty()) {
    if (!spec.r_tr.empty()) {
      check_weights(spec.r_tr, spec.k_groups, "r_tr");
      for (std::size_t g = 0; g < derived_tr.size(); ++g) {
        if (std::fabs(spec.r_tr[g] - derived_tr[g]) > 1e-9) {
          fail(ErrorCode::invalid_spec, "r_tr disagrees with the weights implied by the mixture parameters");
        }
      }
    }
    spec.r_tr = derived_tr;
  } else {
    check_weights(spec.r_tr, spec.k_groups, "r_tr");
  }

  if (spec.r_ts.empty()) spec.r_ts.assign(spec.k_groups, 1.0 / static_cast<double>(spec.k_groups));
  check_weights(spec.r_ts, spec.k_groups, "r_ts");
  return spec;
}

std::vector<double> train_weights(const ShiftSpec& spec) { return normalized(spec).r_tr; }

GroupPlan train_plan(const ShiftSpec& spec) { return raw_train_plan(normalized(spec)); }

GroupPlan plan_for(const ShiftSpec& input, Split split) {
  const ShiftSpec spec = normalized(input);
  const GroupPlan train = raw_train_plan(spec);
  if (split == Split::train) return train;

  const std::size_t n = split == Split::id_test ? spec.n_id_test : spec.n_ood_test;
  const std::vector<double>& weights = split == Split::id_test ? spec.r_tr : spec.r_ts;
  const std::vector<std::size_t> sizes = apportion(n, weights);
  GroupPlan plan;
  plan.counts.resize(spec.k_groups);
  for (std::size_t g = 0; g < spec.k_groups; ++g) {
    const std::size_t train_size = train.group_size(g);
    const double frac_pos = train_size > 0
        ? static_cast<double>(train.counts[g][1]) / static_cast<double>(train_size)
        : spec.p_y1;
    const std::size_t pos = round_count(frac_pos * static_cast<double>(sizes[g]));
    plan.counts[g] = {sizes[g] - pos, pos};
  }
  return plan;
}

Dataset::Dataset(std::size_t rows, std::size_t cols, Split split, std::size_t k_groups)
    : cols_(cols), k_groups_(k_groups), split_(split), features_(rows * cols, 0.0),
      labels_(rows, 1), groups_(rows, 0) {}

std::vector<std::size_t> Dataset::group_counts() const {
  std::vector<std::size_t> counts(k_groups_, 0);
  for (auto g : groups_) ++counts[g];
  return counts;
}

Dataset generate(const ShiftSpec& input, Split split) {
  const ShiftSpec spec = normalized(input);
  const GroupPlan plan = plan_for(spec, split);
  Dataset data(plan.total(), spec.dim(), split, spec.k_groups);
  const std::uint64_t pool_key = derive_seed(spec.master_seed, split_salt(split));

  std::size_t i = 0;
  for (std::size_t g = 0; g < spec.k_groups; ++g) {
    const double alignment = group_alignment(g, spec.k_groups);
    for (int label_index = 0; label_index < 2; ++label_index) {
      const int y = label_index == 0 ? -1 : 1;
      for (std::size_t c = 0; c < plan.counts[g][label_index]; ++c, ++i) {
        data.set_label(i, y);
        data.set_group(i, g);
        SplitMix64 rng(derive_seed(pool_key, i));
        auto x = data.row(i);
        for (std::size_t j = 0; j < spec.d_core; ++j) x[j] = y + spec.sigma_core * rng.normal();
        const double spurious_mean = spec.mode == MixtureMode::correlation ? alignment : alignment * y;
        for (std::size_t j = 0; j < spec.d_spu; ++j) {
          x[spec.d_core + j] = spurious_mean + spec.sigma_spu * rng.normal();
        }
      }
    }
  }
  return data;
}

std::size_t MixtureTable::total() const noexcept {
  return cells[0][0] + cells[0][1] + cells[1][0] + cells[1][1];
}

double MixtureTable::pi1() const noexcept {
  return static_cast<double>(cells[1][1]) / static_cast<double>(class_total(1));
}

double MixtureTable::pi0() const noexcept {
  return static_cast<double>(cells[0][1]) / static_cast<double>(class_total(0));
}

MixtureTable mixture_table(std::size_t total, double class_balance, double attr_balance,
                           double correlation_level) {
  if (total == 0) fail(ErrorCode::infeasible_marginals, "total must be positive");
  if (!(class_balance > 0.0 && class_balance < 1.0) || !(attr_balance > 0.0 && attr_balance < 1.0)) {
    fail(ErrorCode::infeasible_marginals, "marginals must lie in (0, 1)");
  }
  if (!(correlation_level >= 0.0 && correlation_level <= 1.0)) {
    fail(ErrorCode::infeasible_marginals, "correlation_level must lie in [0, 1]");
  }
  const double n = static_cast<double>(total);
  const std::size_t pos = round_count(class_balance * n);
  const std::size_t attr = round_count(attr_balance * n);
  if (pos == 0 || pos == total || attr == 0 || attr == total) {
    fail(ErrorCode::infeasible_marginals, "marginals round to an empty class or attribute");
  }
  const std::size_t lo = pos + attr > total ? pos + attr - total : 0;
  const std::size_t hi = std::min(pos, attr);
  const double independent = static_cast<double>(pos) * static_cast<double>(attr) / n;
  const double target = independent + correlation_level * (static_cast<double>(hi) - independent);
  const std::size_t free_cell = std::clamp(round_count(target), lo, hi);

  MixtureTable table;
  table.cells[1][1] = free_cell;
  table.cells[1][0] = pos - free_cell;
  table.cells[0][1] = attr - free_cell;
  table.cells[0][0] = total - pos - attr + free_cell;
  return table;
}

ShiftSpec spec_from_table(const MixtureTable& table, const NoiseParams& params) {
  const std::size_t total = table.total();
  if (total == 0 || table.class_total(1) == 0 || table.class_total(0) == 0) {
    fail(ErrorCode::invalid_spec, "table needs both classes populated");
  }
  ShiftSpec spec;
  spec.mode = MixtureMode::correlation;
  spec.k_groups = 2;
  spec.d_core = params.d_core;
  spec.d_spu = params.d_spu;
  spec.sigma_core = params.sigma_core;
  spec.sigma_spu = params.sigma_spu;
  spec.n_id_test = params.n_id_test;
  spec.n_ood_test = params.n_ood_test;
  spec.master_seed = params.master_seed;
  spec.n_train = total;
  spec.p_y1 = static_cast<double>(table.class_total(1)) / static_cast<double>(total);
  spec.pi1 = table.pi1();
  spec.pi0 = table.pi0();
  return normalized(spec);
}

}  // namespace moonlab
