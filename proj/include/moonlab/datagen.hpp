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

#ifndef MOONLAB_DATAGEN_HPP
#define MOONLAB_DATAGEN_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace moonlab {

// How training-group and label counts are derived from a ShiftSpec.
//   groups:      group sizes from p_maj (K = 2) or r_tr (K > 2); labels
//                split by p_y1 inside every group.
//   correlation: 2x2 (Y, Z) cell counts from p_y1, pi1 = P(Z=1 | Y=+1) and
//                pi0 = P(Z=1 | Y=-1); the group is the attribute Z and
//                x_spu ~ N(a * 1, sigma_spu^2 I) with a = +1 for Z = 1 and
//                a = -1 for Z = 0.
enum class MixtureMode { groups, correlation };

enum class Split { train, id_test, ood_test };

std::string_view to_string(MixtureMode mode) noexcept;
std::string_view to_string(Split split) noexcept;
MixtureMode parse_mixture_mode(std::string_view text);
Split parse_split(std::string_view text);

struct ShiftSpec {
  std::size_t d_core = 100;
  std::size_t d_spu = 10;
  double sigma_core = 10.0;
  double sigma_spu = 1.0;
  std::size_t n_train = 3000;
  double p_maj = 0.9;
  double pi1 = 0.9;
  double pi0 = 0.1;
  double p_y1 = 0.5;
  std::size_t n_id_test = 10000;
  std::size_t n_ood_test = 10000;
  // Indexed by group; empty means "derive" (from p_maj or the cell table
  // for r_tr, equal weights for r_ts).
  std::vector<double> r_tr;
  std::vector<double> r_ts;
  std::size_t k_groups = 2;
  std::uint64_t master_seed = 1;
  MixtureMode mode = MixtureMode::groups;

  std::size_t dim() const noexcept { return d_core + d_spu; }
};

// Per-group label counts of one pool. counts[g] = {n_negative, n_positive}.
struct GroupPlan {
  std::vector<std::array<std::size_t, 2>> counts;

  std::size_t group_size(std::size_t g) const noexcept { return counts[g][0] + counts[g][1]; }
  std::size_t total() const noexcept;
};

// Spurious-attribute multiplier of group g: evenly spaced in [-1, +1].
// In groups mode rows of group g draw x_spu ~ N(a_g * y * 1, sigma_spu^2 I).
double group_alignment(std::size_t group, std::size_t k_groups) noexcept;

// Validates and fills derived fields (r_tr, r_ts). Throws invalid-spec or
// degenerate-dimension.
ShiftSpec normalized(const ShiftSpec& spec);

// Mixture weights of the training pool, by group.
std::vector<double> train_weights(const ShiftSpec& spec);

GroupPlan train_plan(const ShiftSpec& spec);
GroupPlan plan_for(const ShiftSpec& spec, Split split);

/// One generated pool. Rows are stored group by group, negatives before
/// positives inside each group; features are row-major.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::size_t rows, std::size_t cols, Split split, std::size_t k_groups);

  std::size_t rows() const noexcept { return labels_.size(); }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t k_groups() const noexcept { return k_groups_; }
  Split split() const noexcept { return split_; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {features_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) noexcept { return {features_.data() + i * cols_, cols_}; }
  int label(std::size_t i) const noexcept { return labels_[i]; }
  std::size_t group(std::size_t i) const noexcept { return groups_[i]; }

  std::span<const double> features() const noexcept { return features_; }
  std::span<const std::int8_t> labels() const noexcept { return labels_; }
  std::span<const std::uint32_t> groups() const noexcept { return groups_; }

  void set_label(std::size_t i, int y) noexcept { labels_[i] = static_cast<std::int8_t>(y); }
  void set_group(std::size_t i, std::size_t g) noexcept { groups_[i] = static_cast<std::uint32_t>(g); }

  // Rows per group.
  std::vector<std::size_t> group_counts() const;

  bool operator==(const Dataset&) const = default;

 private:
  std::size_t cols_ = 0;
  std::size_t k_groups_ = 0;
  Split split_ = Split::train;
  std::vector<double> features_;
  std::vector<std::int8_t> labels_;
  std::vector<std::uint32_t> groups_;
};

// Samples a pool. Deterministic in (spec, split); each row draws from its own
// SplitMix64 stream keyed by (master_seed, split, row index).
Dataset generate(const ShiftSpec& spec, Split split);

/// Training-set (Y, Z) counts. cells[y][z] with y, z in {0, 1}; Z = 1 is the
/// attribute value that is positively associated with Y = 1.
struct MixtureTable {
  std::array<std::array<std::size_t, 2>, 2> cells{};

  std::size_t total() const noexcept;
  std::size_t class_total(int y) const noexcept { return cells[y][0] + cells[y][1]; }
  std::size_t attr_total(int z) const noexcept { return cells[0][z] + cells[1][z]; }
  // P(Z=1 | Y=1) and P(Z=1 | Y=0) as read off the table.
  double pi1() const noexcept;
  double pi0() const noexcept;
};

// Builds the table with the three marginals fixed. correlation_level 0 gives
// the independence table, 1 the Frechet-maximal one (cell(Y=1,Z=1) =
// min(class, attr)); values in between interpolate linearly and round.
MixtureTable mixture_table(std::size_t total, double class_balance, double attr_balance,
                           double correlation_level);

struct NoiseParams {
  std::size_t d_core = 100;
  std::size_t d_spu = 10;
  double sigma_core = 10.0;
  double sigma_spu = 1.0;
  std::size_t n_id_test = 10000;
  std::size_t n_ood_test = 10000;
  std::uint64_t master_seed = 1;
};

// Correlation-mode spec whose training cells reproduce the table exactly.
ShiftSpec spec_from_table(const MixtureTable& table, const NoiseParams& params);

// Largest-remainder apportionment of `total` items over `weights`.
std::vector<std::size_t> apportion(std::size_t total, std::span<const double> weights);

}  // namespace moonlab

#endif  // MOONLAB_DATAGEN_HPP
