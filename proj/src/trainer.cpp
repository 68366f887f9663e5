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

#include "moonlab/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "moonlab/error.hpp"
#include "moonlab/rng.hpp"

namespace moonlab {

namespace {

double logistic_loss(double margin) noexcept {
  return margin > 0.0 ? std::log1p(std::exp(-margin)) : -margin + std::log1p(std::exp(margin));
}

// sigma(-margin) without overflow.
double sigmoid_neg(double margin) noexcept {
  if (margin >= 0.0) {
    const double e = std::exp(-margin);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(margin));
}

std::size_t steps_per_epoch(const HyperParams& hp, std::size_t rows) {
  if (hp.full_batch()) return 1;
  return (rows + hp.batch_size - 1) / hp.batch_size;
}

}  // namespace

void validate(const HyperParams& hp) {
  if (!(hp.learning_rate > 0.0) || !std::isfinite(hp.learning_rate)) {
    fail(ErrorCode::invalid_argument, "learning_rate must be positive");
  }
  if (!(hp.l2 >= 0.0) || !std::isfinite(hp.l2)) fail(ErrorCode::invalid_argument, "l2 must be non-negative");
  if (hp.max_epochs == 0) fail(ErrorCode::invalid_argument, "max_epochs must be positive");
  if (hp.snapshot_epochs.empty()) fail(ErrorCode::invalid_argument, "snapshot_epochs is empty");
  double previous = 0.0;
  for (double e : hp.snapshot_epochs) {
    if (!(e > previous)) fail(ErrorCode::invalid_argument, "snapshot_epochs must be positive and strictly increasing");
    previous = e;
  }
  if (previous > static_cast<double>(hp.max_epochs)) {
    fail(ErrorCode::invalid_argument, "last snapshot epoch exceeds max_epochs");
  }
}

std::vector<std::size_t> snapshot_steps(const HyperParams& hp, std::size_t rows) {
  validate(hp);
  const double per_epoch = static_cast<double>(steps_per_epoch(hp, rows));
  std::vector<std::size_t> steps;
  for (double e : hp.snapshot_epochs) {
    // The small slack keeps 0.3 * 10 from landing on step 4.
    const auto s = static_cast<std::size_t>(std::max(1.0, std::ceil(e * per_epoch - 1e-9)));
    if (!steps.empty() && s <= steps.back()) {
      std::ostringstream msg;
      msg << "snapshot epoch " << e << " maps to step " << s << ", already used by an earlier snapshot";
      fail(ErrorCode::invalid_argument, msg.str());
    }
    steps.push_back(s);
  }
  return steps;
}

std::string model_id(const HyperParams& hp, double epoch) {
  char buf[160];
  char batch[24];
  if (hp.full_batch()) {
    std::snprintf(batch, sizeof(batch), "full");
  } else {
    std::snprintf(batch, sizeof(batch), "%zu", hp.batch_size);
  }
  std::snprintf(buf, sizeof(buf), "lr%.6g-l2%.6g-b%s-s%016" PRIx64 "-e%.6g", hp.learning_rate, hp.l2, batch,
                hp.seed, epoch);
  return buf;
}

double decision_value(const ModelRecord& model, std::span<const double> x) noexcept {
  double s = 0.0;
  const std::size_t d = std::min(x.size(), model.weights.size());
  for (std::size_t j = 0; j < d; ++j) s += model.weights[j] * x[j];
  return s + model.bias;
}

double objective(const Dataset& data, std::span<const double> weights, double bias, double l2) {
  double total = 0.0;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const auto x = data.row(i);
    double s = bias;
    for (std::size_t j = 0; j < weights.size(); ++j) s += weights[j] * x[j];
    total += logistic_loss(data.label(i) * s);
  }
  double norm2 = 0.0;
  for (double w : weights) norm2 += w * w;
  return total / static_cast<double>(data.rows()) + 0.5 * l2 * norm2;
}

std::vector<ModelRecord> train(const Dataset& data, const HyperParams& hp) {
  const std::size_t n = data.rows();
  const std::size_t d = data.cols();
  if (n == 0 || d == 0) fail(ErrorCode::dimension_mismatch, "training set is empty");
  const std::vector<std::size_t> snaps = snapshot_steps(hp, n);
  const std::size_t per_epoch = steps_per_epoch(hp, n);
  const std::size_t batch = hp.full_batch() ? n : std::min(hp.batch_size, n);

  std::vector<double> w(d, 0.0);
  double b = 0.0;
  std::vector<double> grad(d);
  std::vector<std::uint32_t> order(n);
  std::vector<ModelRecord> out;
  out.reserve(snaps.size());

  std::size_t step = 0;
  std::size_t next_snap = 0;
  for (std::size_t epoch = 0; next_snap < snaps.size(); ++epoch) {
    std::iota(order.begin(), order.end(), 0U);
    if (!hp.full_batch()) {
      SplitMix64 rng(derive_seed(hp.seed, epoch));
      shuffle(order, rng);
    }
    for (std::size_t start = 0; start < n && next_snap < snaps.size(); start += batch) {
      const std::size_t stop = std::min(start + batch, n);
      std::fill(grad.begin(), grad.end(), 0.0);
      double grad_b = 0.0;
      for (std::size_t k = start; k < stop; ++k) {
        const std::size_t i = order[k];
        const auto x = data.row(i);
        const int y = data.label(i);
        double s = b;
        for (std::size_t j = 0; j < d; ++j) s += w[j] * x[j];
        const double coef = -y * sigmoid_neg(y * s);
        for (std::size_t j = 0; j < d; ++j) grad[j] += coef * x[j];
        grad_b += coef;
      }
      const double inv = 1.0 / static_cast<double>(stop - start);
      for (std::size_t j = 0; j < d; ++j) w[j] -= hp.learning_rate * (grad[j] * inv + hp.l2 * w[j]);
      b -= hp.learning_rate * grad_b * inv;
      ++step;

      if (step == snaps[next_snap]) {
        const double epoch_value = hp.snapshot_epochs[next_snap];
        const double loss = objective(data, w, b, hp.l2);
        if (!std::isfinite(loss)) {
          std::ostringstream msg;
          msg << "non-finite loss at epoch " << epoch_value << " (step " << step << ", "
              << static_cast<double>(step) / static_cast<double>(per_epoch) << " epochs)";
          fail(ErrorCode::divergence, msg.str());
        }
        ModelRecord rec;
        rec.model_id = model_id(hp, epoch_value);
        rec.weights = w;
        rec.bias = b;
        rec.hyperparams = hp;
        rec.epoch = epoch_value;
        rec.train_loss = loss;
        out.push_back(std::move(rec));
        ++next_snap;
      }
    }
  }
  return out;
}

SweepResult sweep(const Dataset& data, std::span<const HyperParams> grid, std::size_t jobs) {
  if (grid.empty()) fail(ErrorCode::invalid_argument, "grid is empty");
  struct CellOutcome {
    std::vector<ModelRecord> models;
    bool failed = false;
    std::string message;
  };
  std::vector<CellOutcome> outcomes(grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < grid.size(); c = next++) {
      try {
        outcomes[c].models = train(data, grid[c]);
      } catch (const Error& e) {
        outcomes[c].failed = true;
        outcomes[c].message = e.what();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(jobs, 1, grid.size());
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  SweepResult result;
  std::set<std::string> seen;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    if (outcomes[c].failed) {
      result.failures.push_back({c, grid[c], outcomes[c].message});
      continue;
    }
    for (auto& m : outcomes[c].models) {
      if (!seen.insert(m.model_id).second) {
        fail(ErrorCode::invalid_argument, "duplicate model id " + m.model_id + " (repeated grid cell?)");
      }
      result.models.push_back(std::move(m));
    }
  }
  return result;
}

ModelRecord oracle_classifier(const ShiftSpec& input, OracleMode mode) {
  const ShiftSpec spec = normalized(input);
  ModelRecord rec;
  rec.model_id = mode == OracleMode::core_only ? "oracle-core" : "oracle-all";
  rec.weights.assign(spec.dim(), 0.0);
  const std::size_t active = mode == OracleMode::core_only ? spec.d_core : spec.dim();
  std::fill(rec.weights.begin(), rec.weights.begin() + static_cast<std::ptrdiff_t>(active), 1.0);
  return rec;
}

double lipschitz_bound(const Dataset& data, double l2) {
  const std::size_t n = data.rows();
  const std::size_t d = data.cols();
  if (n == 0) fail(ErrorCode::dimension_mismatch, "empty dataset");
  std::vector<double> v(d + 1, 1.0 / std::sqrt(static_cast<double>(d + 1)));
  std::vector<double> next(d + 1);
  double lambda = 0.0;
  for (int it = 0; it < 200; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = data.row(i);
      double s = v[d];
      for (std::size_t j = 0; j < d; ++j) s += x[j] * v[j];
      for (std::size_t j = 0; j < d; ++j) next[j] += s * x[j];
      next[d] += s;
    }
    double norm = 0.0;
    for (double e : next) norm += e * e;
    norm = std::sqrt(norm);
    if (norm == 0.0) break;
    const double previous = lambda;
    lambda = norm;
    for (std::size_t j = 0; j <= d; ++j) v[j] = next[j] / norm;
    if (std::fabs(lambda - previous) <= 1e-10 * lambda) break;
  }
  // Power iteration approaches from below; pad slightly so the value is a bound.
  return 1.001 * lambda / (4.0 * static_cast<double>(n)) + l2;
}

GridOptions default_grid_options() {
  GridOptions o;
  o.learning_rates = {1e-4, std::pow(10.0, -3.5), 1e-3, std::pow(10.0, -2.5), 1e-2};
  o.l2 = {0.0};
  o.batch_sizes = {0, 8, 32, 128};
  o.replicas = 5;
  o.max_epochs = 25;
  o.snapshot_epochs = {0.01, 0.05, 0.25, 1.0, 5.0, 25.0};
  o.master_seed = 1;
  return o;
}

std::vector<HyperParams> build_grid(const GridOptions& o) {
  if (o.learning_rates.empty() || o.l2.empty() || o.batch_sizes.empty() || o.replicas == 0 ||
      o.snapshot_epochs.empty()) {
    fail(ErrorCode::config, "grid options must be non-empty");
  }
  std::vector<double> whole;
  for (double e : o.snapshot_epochs) {
    const double c = std::ceil(e);
    if (whole.empty() || c > whole.back()) whole.push_back(c);
  }
  std::vector<HyperParams> grid;
  for (double lr : o.learning_rates) {
    for (double l2 : o.l2) {
      for (std::size_t batch : o.batch_sizes) {
        const std::size_t replicas = batch == 0 ? 1 : o.replicas;
        for (std::size_t r = 0; r < replicas; ++r) {
          HyperParams hp;
          hp.learning_rate = lr;
          hp.l2 = l2;
          hp.batch_size = batch;
          hp.max_epochs = o.max_epochs;
          hp.snapshot_epochs = batch == 0 ? whole : o.snapshot_epochs;
          hp.seed = derive_seed(o.master_seed, r);
          validate(hp);
          grid.push_back(std::move(hp));
        }
      }
    }
  }
  return grid;
}

}  // namespace moonlab
