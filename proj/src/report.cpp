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

#include "moonlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "moonlab/error.hpp"

namespace moonlab {

namespace {

void round_all(Json& j) {
  if (j.is_number_float()) {
    j = round12(j.get<double>());
  } else if (j.is_structured()) {
    for (auto& v : j) round_all(v);
  }
}

Json optional_real(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

std::string dump_json(const Json& j) {
  Json copy = j;
  round_all(copy);
  return copy.dump(2) + "\n";
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::io, std::string("bad json: ") + e.what());
  }
}

Json to_json(const SplineFit& s) {
  return Json{{"lambda", s.lambda}, {"gcv", s.gcv},       {"edf", s.edf},
              {"n_obs", s.n_obs},   {"knots", s.knots},   {"values", s.values},
              {"second_derivs", s.second_derivs}};
}

Json to_json(const CurveReport& r) {
  Json j;
  j["n_points"] = r.n_points;
  j["linear_fit"] = {{"slope", r.linear_fit.slope}, {"intercept", r.linear_fit.intercept}, {"r2", r.linear_fit.r2}};
  j["probit_fit"] = {{"slope", r.probit_fit.slope}, {"intercept", r.probit_fit.intercept}, {"r2", r.probit_fit.r2}};
  j["quad_fit"] = {{"beta0", r.quad_fit.beta0}, {"beta1", r.quad_fit.beta1}, {"beta2", r.quad_fit.beta2},
                   {"r2", r.quad_fit.r2},       {"beta2_se", r.quad_fit.beta2_se}};
  j["curvature"] = r.curvature;
  j["curvature_se"] = r.curvature_se;
  j["phase_transition"] = optional_real(r.phase_transition);
  j["spline"] = r.spline ? to_json(*r.spline) : Json(nullptr);
  j["maj_range"] = {r.maj_lo, r.maj_hi};
  j["artifact_choices"] = {{"probit_eps", r.eps},
                           {"probit_clamped", r.probit_clamped},
                           {"fit_weighting", "unweighted"},
                           {"spline_lambda_grid", "25 log-spaced values in [1e-6, 1e3], GCV"}};
  return j;
}

Json to_json(const ShiftSpec& s) {
  return Json{{"d_core", s.d_core},
              {"d_spu", s.d_spu},
              {"sigma_core", s.sigma_core},
              {"sigma_spu", s.sigma_spu},
              {"n_train", s.n_train},
              {"p_maj", s.p_maj},
              {"pi1", s.pi1},
              {"pi0", s.pi0},
              {"p_y1", s.p_y1},
              {"n_id_test", s.n_id_test},
              {"n_ood_test", s.n_ood_test},
              {"r_tr", s.r_tr},
              {"r_ts", s.r_ts},
              {"k_groups", s.k_groups},
              {"master_seed", s.master_seed},
              {"mode", std::string(to_string(s.mode))}};
}

Json to_json(const HyperParams& hp) {
  return Json{{"learning_rate", hp.learning_rate},
              {"l2", hp.l2},
              {"batch_size", hp.batch_size},
              {"max_epochs", hp.max_epochs},
              {"snapshot_epochs", hp.snapshot_epochs},
              {"seed", hp.seed}};
}

Json to_json(const PopulationSpec& p) {
  return Json{{"p_y1", p.p_y1}, {"pi1", p.pi1}, {"pi0", p.pi0}, {"p_z1", p.p_z1()}};
}

Json to_json(const ScoreModel& s) { return Json{{"mu0", s.mu0}, {"mu1", s.mu1}, {"s0", s.s0}, {"s1", s.s1}}; }

Json to_json(const NonlinearityComparison& c) {
  return Json{{"delta_probit_r2", c.delta_probit_r2}, {"delta_curvature", c.delta_curvature}, {"verdict", c.verdict}};
}

}  // namespace moonlab
