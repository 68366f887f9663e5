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

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "moonlab/config.hpp"
#include "moonlab/csv_io.hpp"
#include "moonlab/pipeline.hpp"
#include "moonlab/report.hpp"
#include "moonlab/svg.hpp"
#include "test_util.hpp"

namespace moonlab {
namespace {

namespace fs = std::filesystem;
using testing::code_of;
using testing::fresh_dir;

constexpr const char* kSmallConfig = R"(# tiny sweep
[shift]
d_core = 20
d_spu = 5
sigma_core = 3
sigma_spu = 1
n_train = 300
p_maj = 0.8
n_id_test = 400
n_ood_test = 400

[grid]
learning_rates = 0.001, 0.01, 0.1
batch_sizes = full, 32
replicas = 2
max_epochs = 4
snapshot_epochs = 0.25, 1, 4

[analysis]
n_pairs = 40

[output]
master_seed = 5
)";

ExperimentConfig small_config(const fs::path& out) {
  ExperimentConfig cfg = parse_config(kSmallConfig);
  cfg.out_dir = out;
  return cfg;
}

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
  return n;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MOONLAB_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Config, ParsesSectionsAndLists) {
  const ExperimentConfig cfg = parse_config(kSmallConfig);
  EXPECT_EQ(cfg.shift.d_core, 20u);
  EXPECT_EQ(cfg.grid.learning_rates, (std::vector<double>{0.001, 0.01, 0.1}));
  EXPECT_EQ(cfg.grid.batch_sizes, (std::vector<std::size_t>{0, 32}));
  EXPECT_EQ(cfg.analysis.n_pairs, 40u);
  EXPECT_EQ(cfg.master_seed, 5u);
  EXPECT_EQ(cfg.resolved_shift().master_seed, 5u);
  EXPECT_EQ(cfg.resolved_pair_seed(), 5u);
  // 3 lrs x (1 full cell + 2 replicas)
  EXPECT_EQ(cfg.resolved_grid().size(), 9u);
}

TEST(Config, UnsectionedKeysAndTable) {
  const ExperimentConfig cfg = parse_config("n_train = 100\nreplicas = 3\neps = 0.01\n[shift]\nmode = table\n"
                                            "table_total = 1000\ncorrelation_level = 0\n[analysis]\nlambda = gcv\n");
  EXPECT_EQ(cfg.grid.replicas, 3u);
  EXPECT_EQ(cfg.analysis.eps, 0.01);
  EXPECT_FALSE(cfg.analysis.lambda.has_value());
  const ShiftSpec s = cfg.resolved_shift();
  EXPECT_EQ(s.n_train, 1000u);
  EXPECT_DOUBLE_EQ(s.pi1, s.pi0);
}

TEST(Config, Errors) {
  EXPECT_EQ(code_of([] { parse_config("bogus = 1\n"); }), ErrorCode::config);
  EXPECT_EQ(code_of([] { parse_config("[shift]\nd_core = abc\n"); }), ErrorCode::config);
  EXPECT_EQ(code_of([] { parse_config("[nowhere]\n"); }), ErrorCode::config);
  EXPECT_EQ(code_of([] { parse_config("d_core\n"); }), ErrorCode::config);
  EXPECT_EQ(code_of([] { load_config("/nonexistent/moonlab.cfg"); }), ErrorCode::config);
}

TEST(Csv, QuotingRoundTrip) {
  CsvTable t;
  t.header = {"a", "b,c", "d"};
  t.rows = {{"1", "x\"y", "line\nbreak"}, {"", "plain", "3.5"}};
  const std::string text = to_csv(t);
  const CsvTable back = parse_csv(text);
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_EQ(to_csv(back), text);
}

TEST(Json, RoundsToTwelveDigits) {
  EXPECT_EQ(round12(0.1 + 0.2), 0.3);
  Json j;
  j["x"] = 1.0 / 3.0;
  j["list"] = {0.1 + 0.2, 2};
  const std::string text = dump_json(j);
  EXPECT_NE(text.find("0.333333333333"), std::string::npos);
  EXPECT_EQ(dump_json(parse_json(text)), text);
}

TEST(Svg, CirclesTicksAndNoPolylineWithoutOverlays) {
  const std::vector<CurvePoint> pts = {{0.1, 0.2}, {0.5, 0.5}, {0.9, 0.3}};
  const std::string svg = render_svg(pts, {}, PlotStyle{});
  EXPECT_EQ(count_of(svg, "<circle"), 3u);
  EXPECT_EQ(count_of(svg, "<polyline"), 0u);
  const Overlay line = sample_curve("fit", [](double x) { return x; }, 0, 1, 11, "#000");
  EXPECT_EQ(count_of(render_svg(pts, {line}, PlotStyle{}), "<polyline"), 1u);
  EXPECT_EQ(code_of([] { emit_plot({}, {}, PlotStyle{}, "/tmp/never.svg"); }), ErrorCode::invalid_argument);
}

TEST(Svg, LargePlotIsWellFormedAndSmall) {
  std::vector<CurvePoint> pts;
  for (int i = 0; i < 500; ++i) pts.push_back({i / 499.0, (i * 37 % 500) / 499.0});
  PlotStyle style;
  style.title = "a <b> & \"c\"";
  const Overlay line = sample_curve("fit", [](double x) { return x * x; }, 0, 1, 200, "#000");
  const fs::path path = fresh_dir("svg") / "big.svg";
  emit_plot(pts, {line}, style, path);
  EXPECT_LT(fs::file_size(path), 2u * 1024 * 1024);
  boost::property_tree::ptree tree;
  std::ifstream in(path);
  EXPECT_NO_THROW(boost::property_tree::read_xml(in, tree));
  EXPECT_EQ(count_of(read_file(path), "<circle"), 500u);
}

class Pipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fresh_dir("pipeline");
    outcome_ = new SweepOutcome(run_sweep_pipeline(small_config(dir_)));
  }
  static void TearDownTestSuite() { delete outcome_; }
  static inline fs::path dir_;
  static inline SweepOutcome* outcome_ = nullptr;
};

TEST_F(Pipeline, WritesEveryArtifact) {
  for (const char* f : {"train.csv", "id_test.csv", "ood_test.csv", "models.csv", "weights.csv", "results.csv",
                        "preds.csv", "report.json", "moon.svg"}) {
    EXPECT_TRUE(fs::exists(dir_ / f)) << f;
  }
  std::size_t snapshots = 0;
  for (const auto& hp : small_config(dir_).resolved_grid()) snapshots += hp.snapshot_epochs.size();
  EXPECT_EQ(read_csv(dir_ / "results.csv").rows.size(), snapshots);
  EXPECT_EQ(outcome_->models.size(), snapshots);
  for (const auto& e : fs::directory_iterator(dir_)) {
    EXPECT_EQ(e.path().filename().string().find(".tmp"), std::string::npos);
  }
}

TEST_F(Pipeline, RerunIsByteIdenticalAndJobsInvariant) {
  const fs::path other = fresh_dir("pipeline_jobs");
  ExperimentConfig cfg = small_config(other);
  cfg.jobs = 4;
  run_sweep_pipeline(cfg);
  for (const char* f : {"results.csv", "models.csv", "weights.csv", "preds.csv", "report.json", "moon.svg"}) {
    EXPECT_EQ(read_file(dir_ / f), read_file(other / f)) << f;
  }
}

TEST_F(Pipeline, CsvArtifactsRoundTrip) {
  for (const char* f : {"train.csv", "ood_test.csv", "models.csv", "weights.csv", "results.csv", "preds.csv"}) {
    const std::string text = read_file(dir_ / f);
    EXPECT_EQ(to_csv(parse_csv(text)), text) << f;
  }
  const std::string results = read_file(dir_ / "results.csv");
  const auto recs = results_from_csv(parse_csv(results));
  EXPECT_EQ(results_csv(recs, 2), results);
  const auto models = models_from_csv(read_csv(dir_ / "models.csv"), read_csv(dir_ / "weights.csv"));
  EXPECT_EQ(models_csv(models), read_file(dir_ / "models.csv"));
  EXPECT_EQ(weights_csv(models), read_file(dir_ / "weights.csv"));
  const std::string preds = read_file(dir_ / "preds.csv");
  EXPECT_EQ(preds_csv(preds_from_csv(parse_csv(preds))), preds);
  const std::string train = read_file(dir_ / "train.csv");
  EXPECT_EQ(dataset_csv(dataset_from_csv(parse_csv(train), Split::train, 2)), train);
  const std::string report = read_file(dir_ / "report.json");
  EXPECT_EQ(dump_json(parse_json(report)), report);
}

TEST_F(Pipeline, ReportHasCurveAndMixture) {
  const Json j = parse_json(read_file(dir_ / "report.json"));
  ASSERT_TRUE(j.contains("curve"));
  EXPECT_TRUE(j["curve"].contains("curvature"));
  EXPECT_TRUE(j["curve"].contains("probit_fit"));
  EXPECT_LT(outcome_->mixture.exact_max_deviation, 1e-12);
}

TEST_F(Pipeline, AgreementAndWarnings) {
  ExperimentConfig cfg = small_config(dir_);
  const auto a = run_agreement_pipeline(cfg, 40, 9);
  EXPECT_EQ(a.records.size(), 40u);
  EXPECT_TRUE(fs::exists(dir_ / "agreement.json"));
  EXPECT_TRUE(fs::exists(dir_ / "agreement.svg"));
  EXPECT_EQ(read_csv(dir_ / "agreement.csv").rows.size(), 40u);
  const auto one = run_agreement_pipeline(cfg, 1, 9);
  EXPECT_EQ(one.records.size(), 1u);
  EXPECT_FALSE(one.agreement_spline.has_value());
  EXPECT_FALSE(one.warnings.empty());
  const auto again = run_agreement_pipeline(cfg, 40, 9);
  EXPECT_EQ(read_file(dir_ / "agreement.csv"), to_csv(read_csv(dir_ / "agreement.csv")));
}

TEST_F(Pipeline, AnalyzeAndPlot) {
  ExperimentConfig cfg = small_config(dir_);
  const Json j = run_analyze(cfg, std::nullopt);
  EXPECT_TRUE(fs::exists(dir_ / "analysis.json"));
  const Json cmp = run_analyze(cfg, dir_);
  EXPECT_EQ(cmp["comparison"]["verdict"], "comparable");
  run_plot(cfg, dir_ / "results.csv", dir_ / "replot.svg");
  EXPECT_TRUE(fs::exists(dir_ / "replot.svg"));
}

TEST(Series, SingleValueMatchesSweep) {
  const fs::path dir = fresh_dir("series");
  ExperimentConfig cfg = small_config(dir);
  const auto series = run_spurious_series(cfg, SeriesKnob::p_maj, {0.7});
  ASSERT_EQ(series.reports.size(), 1u);
  ExperimentConfig direct = apply_knob(cfg, SeriesKnob::p_maj, 0.7);
  direct.out_dir = fresh_dir("series_direct");
  run_sweep_pipeline(direct);
  fs::path sub;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_directory()) sub = e.path();
  }
  ASSERT_FALSE(sub.empty());
  EXPECT_EQ(read_file(sub / "results.csv"), read_file(direct.out_dir / "results.csv"));
  EXPECT_TRUE(fs::exists(dir / "series.json"));
  EXPECT_EQ(code_of([&] { run_spurious_series(cfg, SeriesKnob::p_maj, {0.9, 0.7}, false); }), ErrorCode::config);
}

TEST(AgreementInputs, MissingInputs) {
  ExperimentConfig cfg = small_config(fresh_dir("agreement_missing"));
  EXPECT_EQ(code_of([&] { run_agreement_pipeline(cfg, 10, 1); }), ErrorCode::missing_inputs);
}

TEST(Theory, SummaryAndRocFile) {
  ExperimentConfig cfg;
  cfg.out_dir = fresh_dir("theory");
  cfg.theory.n_samples = 100000;
  const auto t = run_theory_pipeline(cfg, false);
  EXPECT_NEAR(t.summary["closed_form_gap"].get<double>(), 0.125, 1e-12);
  EXPECT_EQ(read_csv(cfg.out_dir / "roc.csv").rows.size(), t.roc.size());
  EXPECT_TRUE(fs::exists(cfg.out_dir / "theory.json"));
}

TEST(Cli, ExitCodes) {
  const fs::path dir = fresh_dir("cli");
  const fs::path cfg = dir / "small.cfg";
  {
    std::ofstream(cfg) << kSmallConfig;
  }
  const fs::path bad = dir / "bad.cfg";
  {
    std::ofstream(bad) << "nonsense_key = 3\n";
  }
  const fs::path infeasible = dir / "infeasible.cfg";
  {
    std::ofstream(infeasible) << "[shift]\nd_core = 0\n";
  }
  const fs::path diverge = dir / "diverge.cfg";
  {
    std::ofstream(diverge) << kSmallConfig << "[grid]\nlearning_rates = 1e300\n";
  }
  EXPECT_EQ(run_cli("--help"), 0);
  EXPECT_EQ(run_cli("sweep"), 1);
  EXPECT_EQ(run_cli("sweep --config " + bad.string()), 1);
  EXPECT_EQ(run_cli("gen-data --config " + infeasible.string() + " --out " + (dir / "g").string()), 2);
  EXPECT_EQ(run_cli("sweep --config " + diverge.string() + " --out " + (dir / "d").string()), 3);
  EXPECT_EQ(run_cli("agreement --config " + cfg.string() + " --out " + (dir / "empty").string()), 5);
  EXPECT_EQ(run_cli("sweep --config " + cfg.string() + " --out /proc/moonlab_forbidden"), 5);
  EXPECT_EQ(run_cli("sweep --config " + cfg.string() + " --out " + (dir / "a").string() + " --jobs 2"), 0);
  EXPECT_EQ(run_cli("sweep --config " + cfg.string() + " --out " + (dir / "b").string() + " --seed 5"), 0);
  EXPECT_EQ(read_file(dir / "a" / "results.csv"), read_file(dir / "b" / "results.csv"));
  EXPECT_EQ(run_cli("theory --format json --out " + (dir / "t").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "t" / "theory.json"));
  EXPECT_FALSE(fs::exists(dir / "t" / "roc.csv"));
  EXPECT_EQ(run_cli("theory --format xml --out " + (dir / "t").string()), 1);
}

TEST(Cli, ShippedConfigsParse) {
  for (const auto& e : fs::directory_iterator(MOONLAB_CONFIG_DIR)) {
    if (e.path().extension() != ".cfg") continue;
    EXPECT_NO_THROW(load_config(e.path()).resolved_shift()) << e.path();
  }
}

}  // namespace
}  // namespace moonlab
