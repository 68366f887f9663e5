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

#include "moonlab/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "moonlab/error.hpp"
#include "moonlab/rng.hpp"
#include "moonlab/svg.hpp"
#include "moonlab/theory.hpp"

namespace moonlab {

namespace fs = std::filesystem;

namespace {

double chord_distance(CurvePoint p, CurvePoint a, CurvePoint b) {
  const double dx = b.maj - a.maj, dy = b.min - a.min;
  const double len = std::hypot(dx, dy);
  if (len == 0.0) return std::hypot(p.maj - a.maj, p.min - a.min);
  return std::abs(dx * (p.min - a.min) - dy * (p.maj - a.maj)) / len;
}

Json failures_json(const std::vector<SweepFailure>& failures) {
  Json arr = Json::array();
  for (const auto& f : failures) {
    arr.push_back({{"cell", f.cell}, {"hyperparams", to_json(f.hyperparams)}, {"message", f.message}});
  }
  return arr;
}

Json points_json(const std::vector<CurvePoint>& pts) {
  Json arr = Json::array();
  for (const auto& p : pts) arr.push_back({p.maj, p.min});
  return arr;
}

std::vector<Overlay> curve_overlays(const CurveReport& curve) {
  std::vector<Overlay> out;
  const QuadFit q = curve.quad_fit;
  out.push_back(sample_curve(
      "quadratic", [q](double x) { return q.beta0 + q.beta1 * x + q.beta2 * x * x; }, curve.maj_lo, curve.maj_hi, 101,
      "#d62728"));
  if (curve.spline) {
    const SplineFit s = *curve.spline;
    out.push_back(sample_curve("spline", s, curve.maj_lo, curve.maj_hi, 101, "#2ca02c"));
  }
  return out;
}

std::pair<std::size_t, std::size_t> groups_from_report(const fs::path& dir, const ShiftSpec& fallback) {
  const fs::path report = dir / "report.json";
  if (fs::exists(report)) {
    const Json j = parse_json(read_file(report));
    if (j.contains("majority_group") && j.contains("minority_group")) {
      return {j["majority_group"].get<std::size_t>(), j["minority_group"].get<std::size_t>()};
    }
  }
  return {majority_group(fallback.r_tr), minority_group(fallback.r_tr)};
}

std::vector<EvalRecord> read_results(const fs::path& dir) {
  const fs::path p = dir / "results.csv";
  if (!fs::exists(p)) fail(ErrorCode::missing_inputs, p.string() + " not found");
  return results_from_csv(read_csv(p));
}

}  // namespace

std::size_t majority_group(std::span<const double> r_tr) {
  std::size_t best = 0;
  for (std::size_t g = 1; g < r_tr.size(); ++g) {
    if (r_tr[g] >= r_tr[best]) best = g;
  }
  return best;
}

std::size_t minority_group(std::span<const double> r_tr) {
  std::size_t best = 0;
  for (std::size_t g = 1; g < r_tr.size(); ++g) {
    if (r_tr[g] < r_tr[best]) best = g;
  }
  return best;
}

std::vector<CurvePoint> curve_points(const std::vector<EvalRecord>& evals, std::size_t maj, std::size_t min) {
  std::vector<CurvePoint> pts;
  pts.reserve(evals.size());
  for (const auto& e : evals) pts.push_back({e.group_acc.at(maj), e.group_acc.at(min)});
  return pts;
}

MixtureSegment mixture_segment(const std::vector<ModelRecord>& models, const std::vector<EvalRecord>& evals,
                               const Dataset& test, const ShiftSpec& spec, std::size_t maj, std::size_t min,
                               std::uint64_t seed) {
  MixtureSegment seg;
  if (models.empty()) return seg;
  std::size_t best = 0, worst = 0;
  for (std::size_t i = 1; i < evals.size(); ++i) {
    if (evals[i].ood_acc > evals[best].ood_acc) best = i;
    if (evals[i].ood_acc < evals[worst].ood_acc) worst = i;
  }
  const ModelRecord& a = models[best];
  const ModelRecord& b = models[worst];
  seg.model_a = a.model_id;
  seg.model_b = b.model_id;
  const auto counts = test.group_counts();
  const CurvePoint pa{evals[best].group_acc[maj], evals[best].group_acc[min]};
  const CurvePoint pb{evals[worst].group_acc[maj], evals[worst].group_acc[min]};
  for (int i = 0; i <= 10; ++i) {
    const double p = i / 10.0;
    seg.p.push_back(p);
    const EvalRecord ex = model_mixture(a, b, p, test, spec.r_tr, spec.r_ts, MixtureSampling::exact);
    const CurvePoint pe{ex.group_acc[maj], ex.group_acc[min]};
    seg.exact.push_back(pe);
    seg.exact_max_deviation = std::max(seg.exact_max_deviation, chord_distance(pe, pa, pb));
    const EvalRecord sm = model_mixture(a, b, p, test, spec.r_tr, spec.r_ts, MixtureSampling::sampled,
                                        derive_seed(seed, static_cast<std::uint64_t>(i)));
    seg.sampled.push_back({sm.group_acc[maj], sm.group_acc[min]});
    if (p > 0.0 && p < 1.0) {
      for (std::size_t g : {maj, min}) {
        const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(counts[g]));
        seg.sampled_max_deviation_se =
            std::max(seg.sampled_max_deviation_se, std::abs(sm.group_acc[g] - ex.group_acc[g]) / se);
      }
    }
  }
  return seg;
}

SweepOutcome run_sweep(const ExperimentConfig& cfg) {
  SweepOutcome out;
  out.spec = cfg.resolved_shift();
  const std::vector<HyperParams> grid = cfg.resolved_grid();
  const Dataset train = generate(out.spec, Split::train);
  const Dataset pool = generate(out.spec, Split::ood_test);

  SweepResult swept = sweep(train, grid, cfg.jobs);
  out.failures = std::move(swept.failures);
  out.models = std::move(swept.models);
  if (out.models.empty()) fail(ErrorCode::divergence, "every grid cell failed to train");

  out.maj_group = majority_group(out.spec.r_tr);
  out.min_group = minority_group(out.spec.r_tr);
  out.evals.reserve(out.models.size());
  out.preds.reserve(out.models.size());
  for (const auto& m : out.models) {
    PredictionRow row{m.model_id, predictions(m, pool)};
    EvalRecord e = evaluate_predictions(row.bits, pool, out.spec.r_tr, out.spec.r_ts);
    e.model_id = m.model_id;
    e.epoch = m.epoch;
    e.hyperparams = m.hyperparams;
    out.evals.push_back(std::move(e));
    out.preds.push_back(std::move(row));
  }

  CurveOptions copts;
  copts.eps = cfg.analysis.eps;
  copts.lambda = cfg.analysis.lambda;
  try {
    out.curve = fit_curves(curve_points(out.evals, out.maj_group, out.min_group), copts);
  } catch (const Error& e) {
    if (exit_code(e.code()) != 4) throw;
    out.curve_error = e.what();
  }
  out.mixture = mixture_segment(out.models, out.evals, pool, out.spec, out.maj_group, out.min_group,
                                derive_seed(cfg.master_seed, 0x6d6978ULL));

  Json& r = out.report;
  r["spec"] = to_json(out.spec);
  r["grid"] = {{"cells", grid.size()},
               {"learning_rates", cfg.grid.learning_rates},
               {"l2", cfg.grid.l2},
               {"batch_sizes", cfg.grid.batch_sizes},
               {"replicas", cfg.grid.replicas},
               {"max_epochs", cfg.grid.max_epochs},
               {"snapshot_epochs", cfg.grid.snapshot_epochs}};
  r["n_models"] = out.models.size();
  r["failures"] = failures_json(out.failures);
  r["majority_group"] = out.maj_group;
  r["minority_group"] = out.min_group;
  r["curvature"] = out.curve ? Json(out.curve->curvature) : Json(nullptr);
  r["curve"] = out.curve ? to_json(*out.curve) : Json(nullptr);
  if (!out.curve_error.empty()) r["curve_error"] = out.curve_error;
  r["mixture"] = {{"model_a", out.mixture.model_a},
                  {"model_b", out.mixture.model_b},
                  {"p", out.mixture.p},
                  {"exact", points_json(out.mixture.exact)},
                  {"exact_max_chord_deviation", out.mixture.exact_max_deviation},
                  {"sampled", points_json(out.mixture.sampled)},
                  {"sampled_max_deviation_se", out.mixture.sampled_max_deviation_se}};
  return out;
}

SweepOutcome run_sweep_pipeline(const ExperimentConfig& cfg) {
  SweepOutcome out = run_sweep(cfg);
  const std::string train_csv = dataset_csv(generate(out.spec, Split::train));
  const std::string id_csv = dataset_csv(generate(out.spec, Split::id_test));
  const std::string ood_csv = dataset_csv(generate(out.spec, Split::ood_test));
  const std::string models = models_csv(out.models);
  const std::string weights = weights_csv(out.models);
  const std::string results = results_csv(out.evals, out.spec.k_groups);
  const std::string preds = preds_csv(out.preds);
  const std::string report = dump_json(out.report);

  std::vector<Overlay> overlays;
  if (out.curve) overlays = curve_overlays(*out.curve);
  if (!out.mixture.exact.empty()) {
    overlays.push_back({"mixture", {out.mixture.exact.front(), out.mixture.exact.back()}, "#9467bd"});
  }
  PlotStyle style;
  style.title = "minority vs majority accuracy";
  const std::string svg = render_svg(curve_points(out.evals, out.maj_group, out.min_group), overlays, style);

  const fs::path d = cfg.out_dir;
  write_file_atomic(d / "train.csv", train_csv);
  write_file_atomic(d / "id_test.csv", id_csv);
  write_file_atomic(d / "ood_test.csv", ood_csv);
  write_file_atomic(d / "models.csv", models);
  write_file_atomic(d / "weights.csv", weights);
  write_file_atomic(d / "results.csv", results);
  write_file_atomic(d / "preds.csv", preds);
  write_file_atomic(d / "report.json", report);
  write_file_atomic(d / "moon.svg", svg);
  return out;
}

void run_gen_data(const ExperimentConfig& cfg) {
  const ShiftSpec spec = cfg.resolved_shift();
  const std::string train_csv = dataset_csv(generate(spec, Split::train));
  const std::string id_csv = dataset_csv(generate(spec, Split::id_test));
  const std::string ood_csv = dataset_csv(generate(spec, Split::ood_test));
  write_file_atomic(cfg.out_dir / "train.csv", train_csv);
  write_file_atomic(cfg.out_dir / "id_test.csv", id_csv);
  write_file_atomic(cfg.out_dir / "ood_test.csv", ood_csv);
}

SeriesKnob parse_series_knob(std::string_view text) {
  if (text == "sdr") return SeriesKnob::sdr;
  if (text == "p_maj") return SeriesKnob::p_maj;
  if (text == "correlation_level") return SeriesKnob::correlation_level;
  fail(ErrorCode::config, "unknown series knob '" + std::string(text) + "'");
}

std::string_view to_string(SeriesKnob knob) noexcept {
  switch (knob) {
    case SeriesKnob::sdr: return "sdr";
    case SeriesKnob::p_maj: return "p_maj";
    case SeriesKnob::correlation_level: return "correlation_level";
  }
  return "?";
}

ExperimentConfig apply_knob(const ExperimentConfig& cfg, SeriesKnob knob, double value) {
  ExperimentConfig c = cfg;
  switch (knob) {
    case SeriesKnob::sdr:
      c.shift.d_spu = static_cast<std::size_t>(std::llround(value * static_cast<double>(c.shift.d_core)));
      break;
    case SeriesKnob::p_maj:
      c.shift.p_maj = value;
      c.shift.r_tr.clear();
      break;
    case SeriesKnob::correlation_level:
      if (!c.table) c.table.emplace();
      c.table->correlation_level = value;
      break;
  }
  c.out_dir = cfg.out_dir / (std::string(to_string(knob)) + "_" + format_real(value));
  return c;
}

SeriesOutcome run_spurious_series(const ExperimentConfig& cfg, SeriesKnob knob, const std::vector<double>& values,
                                  bool write) {
  if (values.empty()) fail(ErrorCode::config, "series needs at least one value");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) fail(ErrorCode::config, "series values must be strictly ascending");
  }
  SeriesOutcome out;
  out.values = values;
  Json per = Json::array();
  std::vector<double> curv, se, absc, pr2;
  for (double v : values) {
    const ExperimentConfig c = apply_knob(cfg, knob, v);
    const SweepOutcome s = write ? run_sweep_pipeline(c) : run_sweep(c);
    if (!s.curve) fail(ErrorCode::insufficient_points, "series value " + format_real(v) + ": " + s.curve_error);
    out.reports.push_back(*s.curve);
    curv.push_back(s.curve->curvature);
    se.push_back(s.curve->curvature_se);
    absc.push_back(std::abs(s.curve->curvature));
    pr2.push_back(s.curve->probit_fit.r2);
    per.push_back({{"value", v}, {"dir", c.out_dir.filename().string()}, {"curve", to_json(*s.curve)}});
  }
  std::size_t non_decreasing = 0;
  bool strictly = true;
  for (std::size_t i = 1; i < absc.size(); ++i) {
    if (absc[i] >= absc[i - 1]) ++non_decreasing;
    strictly = strictly && absc[i] > absc[i - 1];
  }
  Json& j = out.summary;
  j["knob"] = std::string(to_string(knob));
  j["values"] = values;
  j["master_seed"] = cfg.master_seed;
  j["curvature"] = curv;
  j["curvature_se"] = se;
  j["abs_curvature"] = absc;
  j["probit_r2"] = pr2;
  j["adjacent_pairs"] = absc.size() - 1;
  j["non_decreasing_pairs"] = non_decreasing;
  j["strictly_increasing"] = strictly;
  j["reports"] = per;
  if (write) write_file_atomic(cfg.out_dir / "series.json", dump_json(j));
  return out;
}

std::vector<std::uint32_t> pool_groups(const ShiftSpec& spec, Split split) {
  const GroupPlan plan = plan_for(spec, split);
  std::vector<std::uint32_t> groups;
  groups.reserve(plan.total());
  for (std::size_t g = 0; g < plan.counts.size(); ++g) {
    groups.insert(groups.end(), plan.group_size(g), static_cast<std::uint32_t>(g));
  }
  return groups;
}

AgreementOutcome agreement_analysis(const ShiftSpec& spec, const std::vector<EvalRecord>& evals,
                                    const std::vector<PredictionRow>& preds, std::span<const std::uint32_t> groups,
                                    std::size_t n_pairs, std::uint64_t pair_seed, const AnalysisOptions& opts) {
  AgreementOutcome out;
  for (const auto& p : preds) {
    if (p.bits.size() != groups.size()) {
      fail(ErrorCode::dimension_mismatch, "predictions for " + p.model_id + " do not match the pool size");
    }
  }
  for (const auto& [i, j] : sample_pairs(preds.size(), n_pairs, pair_seed)) {
    AgreementRecord a = agreement_from_predictions(preds[i].model_id, preds[i].bits, preds[j].model_id,
                                                   preds[j].bits, groups, spec.k_groups);
    out.agreement_points.push_back(
        {mixture_value(a.group_agreement, spec.r_tr), mixture_value(a.group_agreement, spec.r_ts)});
    out.records.push_back(std::move(a));
  }
  for (const auto& e : evals) out.accuracy_points.push_back({e.id_acc, e.ood_acc});
  if (out.records.size() < n_pairs) {
    out.warnings.push_back("only " + std::to_string(out.records.size()) + " distinct pairs available");
  }

  auto try_spline = [&](const std::vector<CurvePoint>& pts, const char* name) -> std::optional<SplineFit> {
    std::vector<double> x, y;
    for (const auto& p : pts) {
      x.push_back(p.maj);
      y.push_back(p.min);
    }
    std::vector<double> ux = x;
    std::sort(ux.begin(), ux.end());
    if (std::unique(ux.begin(), ux.end()) - ux.begin() < 5) {
      out.warnings.push_back(std::string(name) + " cloud has fewer than 5 distinct x values; no spline");
      return std::nullopt;
    }
    return smooth_spline(x, y, opts.lambda);
  };
  out.agreement_spline = try_spline(out.agreement_points, "agreement");
  out.accuracy_spline = try_spline(out.accuracy_points, "accuracy");

  out.verdict = "undetermined";
  if (out.agreement_spline && out.accuracy_spline) {
    out.range_lo = std::max(out.agreement_spline->knots.front(), out.accuracy_spline->knots.front());
    out.range_hi = std::min(out.agreement_spline->knots.back(), out.accuracy_spline->knots.back());
    if (out.range_lo < out.range_hi) {
      constexpr int kGrid = 201;
      int above = 0;
      double sum = 0.0;
      for (int i = 0; i < kGrid; ++i) {
        const double x = out.range_lo + (out.range_hi - out.range_lo) * i / (kGrid - 1);
        const double gap = (*out.agreement_spline)(x) - (*out.accuracy_spline)(x);
        if (!std::isfinite(gap)) fail(ErrorCode::non_finite_input, "spline evaluation is not finite");
        if (gap >= 0.02) ++above;
        out.max_abs_gap = std::max(out.max_abs_gap, std::abs(gap));
        sum += gap;
      }
      out.frac_above = static_cast<double>(above) / kGrid;
      out.mean_gap = sum / kGrid;
      if (out.frac_above >= 0.8) {
        out.verdict = "agreement above accuracy";
      } else if (out.max_abs_gap <= 0.03) {
        out.verdict = "aligned";
      } else {
        out.verdict = "mixed";
      }
    } else {
      out.warnings.push_back("agreement and accuracy clouds do not overlap in x");
    }
  }

  Json& j = out.report;
  j["n_pairs"] = out.records.size();
  j["pair_seed"] = pair_seed;
  j["x_axis"] = "ID-weighted value";
  j["y_axis"] = "OOD-weighted value";
  j["agreement_spline"] = out.agreement_spline ? to_json(*out.agreement_spline) : Json(nullptr);
  j["accuracy_spline"] = out.accuracy_spline ? to_json(*out.accuracy_spline) : Json(nullptr);
  j["common_range"] = {out.range_lo, out.range_hi};
  j["frac_above_0.02"] = out.frac_above;
  j["max_abs_gap"] = out.max_abs_gap;
  j["mean_gap"] = out.mean_gap;
  j["verdict"] = out.verdict;
  j["warnings"] = out.warnings;
  return out;
}

AgreementOutcome run_agreement_pipeline(const ExperimentConfig& cfg, std::size_t n_pairs, std::uint64_t pair_seed) {
  const fs::path preds_path = cfg.out_dir / "preds.csv";
  if (!fs::exists(preds_path)) fail(ErrorCode::missing_inputs, preds_path.string() + " not found");
  const std::vector<EvalRecord> evals = read_results(cfg.out_dir);
  const std::vector<PredictionRow> preds = preds_from_csv(read_csv(preds_path));
  const ShiftSpec spec = cfg.resolved_shift();
  const std::vector<std::uint32_t> groups = pool_groups(spec, Split::ood_test);
  AgreementOutcome out = agreement_analysis(spec, evals, preds, groups, n_pairs, pair_seed, cfg.analysis);

  std::vector<Overlay> overlays;
  overlays.push_back({"agreement", out.agreement_points, "#ff7f0e", true});
  if (out.accuracy_spline) {
    overlays.push_back(sample_curve("accuracy spline", *out.accuracy_spline, out.accuracy_spline->knots.front(),
                                    out.accuracy_spline->knots.back(), 101, "#1f77b4"));
  }
  if (out.agreement_spline) {
    overlays.push_back(sample_curve("agreement spline", *out.agreement_spline, out.agreement_spline->knots.front(),
                                    out.agreement_spline->knots.back(), 101, "#ff7f0e"));
  }
  PlotStyle style;
  style.title = "agreement and accuracy";
  style.x_label = "ID";
  style.y_label = "OOD";
  const std::string csv = agreement_csv(out.records, spec.r_tr, spec.r_ts);
  const std::string json = dump_json(out.report);
  const std::string svg = render_svg(out.accuracy_points, overlays, style);
  write_file_atomic(cfg.out_dir / "agreement.csv", csv);
  write_file_atomic(cfg.out_dir / "agreement.json", json);
  write_file_atomic(cfg.out_dir / "agreement.svg", svg);
  return out;
}

Json run_analyze(const ExperimentConfig& cfg, const std::optional<fs::path>& compare_dir) {
  const ShiftSpec spec = cfg.resolved_shift();
  CurveOptions copts;
  copts.eps = cfg.analysis.eps;
  copts.lambda = cfg.analysis.lambda;
  auto fit_dir = [&](const fs::path& dir) {
    const auto [maj, min] = groups_from_report(dir, spec);
    return fit_curves(curve_points(read_results(dir), maj, min), copts);
  };
  const CurveReport a = fit_dir(cfg.out_dir);
  Json j;
  j["curve"] = to_json(a);
  if (compare_dir) {
    const CurveReport b = fit_dir(*compare_dir);
    j["compare_dir"] = compare_dir->string();
    j["compare_curve"] = to_json(b);
    j["comparison"] = to_json(compare_nonlinearity(a, b, cfg.analysis.margin, cfg.analysis.curvature_margin));
  }
  write_file_atomic(cfg.out_dir / "analysis.json", dump_json(j));
  return j;
}

void run_plot(const ExperimentConfig& cfg, const fs::path& results, const fs::path& svg) {
  if (!fs::exists(results)) fail(ErrorCode::missing_inputs, results.string() + " not found");
  const ShiftSpec spec = cfg.resolved_shift();
  const auto [maj, min] = groups_from_report(results.parent_path(), spec);
  const auto pts = curve_points(results_from_csv(read_csv(results)), maj, min);
  CurveOptions copts;
  copts.eps = cfg.analysis.eps;
  copts.lambda = cfg.analysis.lambda;
  std::vector<Overlay> overlays;
  if (pts.size() >= 4) overlays = curve_overlays(fit_curves(pts, copts));
  PlotStyle style;
  style.title = "minority vs majority accuracy";
  emit_plot(pts, overlays, style, svg);
}

TheoryOutcome run_theory(const ExperimentConfig& cfg) {
  const TheoryOptions& t = cfg.theory;
  validate(t.pop);
  TheoryOutcome out;
  const double closed = accuracy_gap(t.pop, t.tpr, t.tnr);
  const RateRealization rr = realize_rates(t.tpr, t.tnr);
  const MonteCarloGap mc = monte_carlo_gap(t.pop, rr.score, rr.threshold, t.n_samples, cfg.master_seed,
                                           static_cast<unsigned>(cfg.jobs));
  const double z = mc.se > 0.0 ? std::abs(closed - mc.gap) / mc.se : (closed == mc.gap ? 0.0 : INFINITY);
  out.roc = roc_traverse(t.pop, t.score, t.n_thresholds);
  std::vector<CurvePoint> pts;
  for (const auto& p : out.roc) pts.push_back({p.maj_acc, p.min_acc});
  const CurveReport curve = fit_curves(pts, {});
  const auto bal = std::find_if(out.roc.begin(), out.roc.end(), [](const RocPoint& p) { return p.gap == 0.0; });

  Json& j = out.summary;
  j["population"] = to_json(t.pop);
  j["tpr"] = t.tpr;
  j["tnr"] = t.tnr;
  j["closed_form_gap"] = closed;
  j["subpop_accuracy"] = {{"z1", subpop_accuracy(t.pop, t.tpr, t.tnr, 1)}, {"z0", subpop_accuracy(t.pop, t.tpr, t.tnr, 0)}};
  j["monte_carlo"] = {{"gap", mc.gap}, {"se", mc.se},     {"acc_z1", mc.acc1}, {"acc_z0", mc.acc0},
                      {"n_z1", mc.n1}, {"n_z0", mc.n0},   {"n_samples", t.n_samples}, {"seed", cfg.master_seed}};
  j["z_score"] = z;
  j["verdict"] = z <= 3.0 ? "consistent" : "inconsistent";
  j["roc"] = {{"score", to_json(t.score)},
              {"n_points", out.roc.size()},
              {"curvature", curve.curvature},
              {"curvature_se", curve.curvature_se},
              {"balanced_threshold", bal != out.roc.end() ? Json(bal->threshold) : Json(nullptr)},
              {"balanced_point", bal != out.roc.end() ? Json{bal->maj_acc, bal->min_acc} : Json(nullptr)}};
  return out;
}

TheoryOutcome run_theory_pipeline(const ExperimentConfig& cfg, bool json_format) {
  TheoryOutcome out = run_theory(cfg);
  CsvTable t;
  t.header = {"threshold", "tnr", "tpr", "maj_acc", "min_acc", "gap"};
  Json rows = Json::array();
  for (const auto& p : out.roc) {
    t.rows.push_back({format_real(p.threshold), format_real(p.tnr), format_real(p.tpr), format_real(p.maj_acc),
                      format_real(p.min_acc), format_real(p.gap)});
    rows.push_back({{"threshold", p.threshold}, {"tnr", p.tnr}, {"tpr", p.tpr},
                    {"maj_acc", p.maj_acc},     {"min_acc", p.min_acc}, {"gap", p.gap}});
  }
  Json summary = out.summary;
  if (json_format) {
    summary["roc_points"] = rows;
  } else {
    write_file_atomic(cfg.out_dir / "roc.csv", to_csv(t));
  }
  write_file_atomic(cfg.out_dir / "theory.json", dump_json(summary));
  return out;
}

}  // namespace moonlab
