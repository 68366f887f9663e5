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

#ifndef MOONLAB_TRAINER_HPP
#define MOONLAB_TRAINER_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "moonlab/datagen.hpp"

namespace moonlab {

struct HyperParams {
  double learning_rate = 1e-3;
  double l2 = 0.0;
  std::size_t batch_size = 0;  // 0 means full batch
  std::size_t max_epochs = 25;
  // Strictly increasing, positive, last entry <= max_epochs. Fractional
  // values snapshot part-way through an epoch: epoch e is taken after
  // ceil(e * steps_per_epoch) optimizer steps.
  std::vector<double> snapshot_epochs = {1.0};
  std::uint64_t seed = 0;

  bool full_batch() const noexcept { return batch_size == 0; }
  bool operator==(const HyperParams&) const = default;
};

void validate(const HyperParams& hp);

// Optimizer step at which each snapshot is taken for a training set of
// `rows` rows. Throws invalid-argument if two snapshots collapse onto the
// same step.
std::vector<std::size_t> snapshot_steps(const HyperParams& hp, std::size_t rows);

struct ModelRecord {
  std::string model_id;
  std::vector<double> weights;
  double bias = 0.0;
  HyperParams hyperparams;
  double epoch = 0.0;
  double train_loss = 0.0;

  bool operator==(const ModelRecord&) const = default;
};

std::string model_id(const HyperParams& hp, double epoch);

// w.x + b with the fixed row-order summation used everywhere.
double decision_value(const ModelRecord& model, std::span<const double> x) noexcept;

// +1 iff w.x + b >= 0 (ties resolve to +1).
inline int predict(const ModelRecord& model, std::span<const double> x) noexcept {
  return decision_value(model, x) >= 0.0 ? 1 : -1;
}

// Mean logistic loss plus (l2/2)|w|^2 over the whole dataset.
double objective(const Dataset& data, std::span<const double> weights, double bias, double l2);

/// Gradient descent on the regularized mean logistic loss from an all-zero
/// start. One record per snapshot, in snapshot order. Mini-batches walk a
/// permutation drawn from (hp.seed, epoch); full batch walks rows in order.
/// Throws divergence (with the epoch) on a non-finite loss and
/// dimension-mismatch on an empty training set.
std::vector<ModelRecord> train(const Dataset& data, const HyperParams& hp);

struct SweepFailure {
  std::size_t cell = 0;
  HyperParams hyperparams;
  std::string message;
};

struct SweepResult {
  std::vector<ModelRecord> models;  // grid order, snapshots in epoch order
  std::vector<SweepFailure> failures;
};

// Trains every grid cell. A failing cell is recorded and skipped. jobs > 1
// trains cells on worker threads; the output does not depend on jobs.
SweepResult sweep(const Dataset& data, std::span<const HyperParams> grid, std::size_t jobs = 1);

enum class OracleMode { core_only, all_features };

// Analytic linear rules: core_only puts weight 1 on every core coordinate,
// all_features on every coordinate; bias 0.
ModelRecord oracle_classifier(const ShiftSpec& spec, OracleMode mode);

// Upper bound on the gradient-Lipschitz constant of the objective:
// lambda_max([X 1]^T [X 1]) / (4n) + l2, by power iteration.
double lipschitz_bound(const Dataset& data, double l2);

struct GridOptions {
  std::vector<double> learning_rates;
  std::vector<double> l2;
  std::vector<std::size_t> batch_sizes;  // 0 = full batch
  std::size_t replicas = 5;
  std::size_t max_epochs = 25;
  std::vector<double> snapshot_epochs;
  std::uint64_t master_seed = 1;
};

// Default sweep: 5 learning rates log-spaced
// over [1e-4, 1e-2], l2 = 0, batches {full, 8, 32, 128}, 5 replicas,
// snapshots {0.01, 0.05, 0.25, 1, 5, 25}.
GridOptions default_grid_options();

// Cartesian product in (lr, l2, batch, replica) order. Replica r gets seed
// derive_seed(master_seed, r). Full-batch cells are seed-independent, so
// they are emitted once, with snapshots rounded up to whole epochs.
std::vector<HyperParams> build_grid(const GridOptions& options);

}  // namespace moonlab

#endif  // MOONLAB_TRAINER_HPP
