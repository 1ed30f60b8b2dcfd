// Copyright 2026 The hrdiff Authors.
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

// Acceptance runner. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Arguments select criteria by number.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hrdiff/config.h"
#include "hrdiff/csv_io.h"
#include "hrdiff/dataset.h"
#include "hrdiff/diffusion.h"
#include "hrdiff/features.h"
#include "hrdiff/hr_transformer.h"
#include "hrdiff/preprocess.h"
#include "hrdiff/rng.h"
#include "hrdiff/schedule.h"
#include "json.hpp"
#include "model_fixtures.h"
#include "oracles.h"
#include "pipeline_fixture.h"
#include "primitive_cases.h"

namespace hrdiff {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Clock {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string Fmt(const char* format, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, a);
  return buf;
}

// Relative error with 0/0 counted as exact.
double RelError(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

std::string ReadText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// Rows of a CSV written by the CLI, preamble and header skipped.
std::vector<std::vector<std::string>> CsvRows(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// 1. Feature streams against brute force.

Outcome FeatureStreams() {
  const Clock clock;
  Rng rng(101);
  const FeatureParams params;
  double worst = 0.0;
  std::size_t points = 0;
  bool warmup_ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.Index(200);
    std::vector<double> h(n);
    double x = rng.Uniform(50.0, 170.0);
    for (auto& v : h) {
      x += 0.1 * (100.0 - x) + 5.0 * rng.Normal();
      v = x;
    }
    FeatureStream stream(params);
    for (std::size_t t = 0; t < n; ++t) {
      const auto f = stream.Push(h[t]);
      if (f.has_value() != (t + 1 >= params.warmup())) warmup_ok = false;
      if (!f) continue;
      ++points;
      worst = std::max({worst, RelError(f->gradient, oracle::Gradient(h, t)),
                        RelError(f->rolling_std, oracle::RollingStd(h, t, params.std_window)),
                        RelError(f->ema, oracle::Ema(h, t, params.ema_alpha)),
                        RelError(f->trend, oracle::SmoothedTrend(h, t, params.trend_lag,
                                                                 params.trend_window))});
    }
  }
  const double secs = clock.Seconds();
  return {warmup_ok && points > 0 && worst <= 1e-12 && secs < 5.0,
          std::to_string(points) + " points, max rel err " + Fmt("%.2e", worst) + ", " +
              Fmt("%.2f", secs) + " s"};
}

// ---------------------------------------------------------------------------
// 2. Schedule identities.

Outcome ScheduleIdentitiesAll() {
  bool ok = true;
  double worst = 0.0;
  std::string failures;
  for (auto kind : {ScheduleKind::kLinear, ScheduleKind::kQuadratic, ScheduleKind::kCosine}) {
    for (std::size_t steps : {50, 100, 200}) {
      const auto s = DiffusionSchedule::Build(kind, steps);
      const auto r = fixture::CheckScheduleIdentities(s);
      worst = std::max(worst, r.max_laplace_scale_error);
      const bool cell = r.alpha_bar_recursion_exact && r.max_laplace_scale_error <= 1e-12 &&
                        r.beta_tilde_first_is_beta && r.snr_strictly_decreasing;
      if (!cell) {
        failures += " " + std::string(ScheduleKindName(kind)) + "/" + std::to_string(steps);
      }
      ok = ok && cell;
    }
  }
  return {ok, "9 schedules, max |2b^2 - (1 - abar)| " + Fmt("%.1e", worst) +
                  (failures.empty() ? "" : ", failed:" + failures)};
}

// ---------------------------------------------------------------------------
// 3. Laplace sampler moments.

Outcome LaplaceMoments() {
  Rng rng(303);
  const auto m = oracle::SampleMoments(SampleLaplace(1000000, 1.0, rng));
  Rng g(303);
  std::vector<double> gauss(1000000);
  for (auto& v : gauss) v = std::sqrt(2.0) * g.Normal();
  const auto gm = oracle::SampleMoments(gauss);
  const bool laplace_ok =
      std::abs(m.variance - 2.0) <= 0.05 && std::abs(m.excess_kurtosis - 3.0) <= 0.3;
  const bool gauss_rejected = std::abs(gm.excess_kurtosis - 3.0) > 0.3;
  return {laplace_ok && gauss_rejected,
          "variance " + Fmt("%.4f", m.variance) + ", excess kurtosis " +
              Fmt("%.3f", m.excess_kurtosis) + "; gaussian kurtosis " +
              Fmt("%.3f", gm.excess_kurtosis) + (gauss_rejected ? " rejected" : " accepted")};
}

// ---------------------------------------------------------------------------
// 4. Gradient checks.

ModelConfig DeskModelConfig() {
  ModelConfig c;
  c.d_model = 32;
  c.heads = 4;
  c.window = 10;
  c.dropout = 0.0;
  return c;
}

Outcome GradientChecks() {
  const Clock clock;
  const auto cases = fixture::PrimitiveGradCases(404);
  double worst = 0.0;
  std::string worst_name;
  for (const auto& c : cases) {
    if (c.max_rel_error >= worst) {
      worst = c.max_rel_error;
      worst_name = c.name;
    }
  }
  HrTransformer model(DeskModelConfig(), 404);
  Rng rng(405);
  const auto input = fixture::RandomInput(10, rng, ActivityLabel::kSwimming);
  const auto full = fixture::FullModelGradCheck(model, input, 32, 406);
  const double secs = clock.Seconds();
  return {worst < 1e-6 && full.coordinates == 32 && full.max_rel_error < 1e-4 && secs < 120.0,
          std::to_string(cases.size()) + " primitives max " + Fmt("%.1e", worst) + " (" +
              worst_name + "), full graph " + Fmt("%.1e", full.max_rel_error) + " on " +
              std::to_string(full.coordinates) + " coordinates, " + Fmt("%.1f", secs) + " s"};
}

// ---------------------------------------------------------------------------
// 5. Causality and routing.

Outcome CausalityAndRouting() {
  bool ok = true;
  std::string detail;
  for (std::size_t blocks : {1, 3}) {
    auto config = DeskModelConfig();
    config.transformer_blocks = blocks;
    const HrTransformer model(config, 505);
    Rng rng(506);
    const auto input = fixture::RandomInput(10, rng, ActivityLabel::kRunning);
    const auto probe = fixture::ProbeDecoderCausality(model, input, 5, rng);
    ok = ok && probe.max_future == 0.0 && probe.min_present > 0.0;
    detail += "blocks " + std::to_string(blocks) + ": future " + Fmt("%.1e", probe.max_future) +
              ", present >= " + Fmt("%.1e", probe.min_present) + "; ";
  }
  HrTransformer model(DeskModelConfig(), 507);
  Rng rng(508);
  const auto routing = fixture::ProbeRouting(model, rng, 32);
  ok = ok && routing.labels_recovered && routing.permutation_bit_equal;
  detail += std::string("labels ") + (routing.labels_recovered ? "recovered" : "lost") +
            ", permutation " + (routing.permutation_bit_equal ? "bit-equal" : "differs");
  return {ok, detail};
}

// ---------------------------------------------------------------------------
// 6. Cheating denoiser.

Outcome CheatingDenoiser() {
  const Clock clock;
  double worst = 0.0;
  for (auto kind : {ScheduleKind::kLinear, ScheduleKind::kQuadratic, ScheduleKind::kCosine}) {
    const auto s = DiffusionSchedule::Build(kind, 50);
    worst = std::max(worst, fixture::CheatingRoundTripRmse(s, 100, 10, 606));
  }
  const double secs = clock.Seconds();
  return {worst < 0.05 && secs < 10.0,
          "worst mean RMSE " + Fmt("%.2e", worst) + " over 3 schedules x 100 trials, " +
              Fmt("%.2f", secs) + " s"};
}

// ---------------------------------------------------------------------------
// Desk-scale pipeline shared by criteria 7 to 9.

struct DeskRun {
  fs::path root;
  fs::path config;
  std::string error;
};

const fs::path& WorkRoot() {
  static const fs::path root = fs::current_path() / "acceptance_work";
  return root;
}

fs::path DeskConfigPath() { return fs::path(HRDIFF_SOURCE_DIR) / "configs" / "desk.json"; }

// Writes desk.json with the edit applied into the work directory.
fs::path DerivedConfig(const std::string& name, const std::function<void(Json&)>& edit) {
  Json j = Json::parse(ReadText(DeskConfigPath()));
  edit(j);
  const fs::path path = WorkRoot() / name;
  fixture::WriteFile(path, j.dump(2) + "\n");
  return path;
}

fixture::CliRun CliLogged(std::vector<std::string> args, const fs::path& log) {
  std::ofstream err(log);
  std::ostringstream out;
  fixture::CliRun r;
  r.code = cli::RunCli(args, out, err);
  r.out = out.str();
  return r;
}

const DeskRun& Desk() {
  static const DeskRun run = [] {
    DeskRun r;
    r.root = WorkRoot() / "desk";
    fs::remove_all(r.root);
    fs::create_directories(r.root);
    r.config = DeskConfigPath();
    const std::string cfg = r.config.string();
    auto g = fixture::Cli({"generate", "--config", cfg, "--out", (r.root / "gen").string()});
    if (g.code != 0) {
      r.error = "generate: " + g.err;
      return r;
    }
    auto p = fixture::Cli({"preprocess", "--config", cfg, "--data",
                           (r.root / "gen/data").string(), "--out", (r.root / "pre").string()});
    if (p.code != 0) r.error = "preprocess: " + p.err;
    return r;
  }();
  return run;
}

// ---------------------------------------------------------------------------
// 7. Desk-scale learning, routed against vanilla.

struct TrainOutcome {
  int code = 0;
  double seconds = 0.0;
  Json report;
  std::vector<double> val;
};

TrainOutcome Train(const fs::path& config, const fs::path& out) {
  TrainOutcome t;
  const Clock clock;
  fs::create_directories(out);
  t.code = CliLogged({"train", "--config", config.string(), "--data",
                      (Desk().root / "pre/data").string(), "--out", out.string()},
                     out.parent_path() / (out.filename().string() + ".log"))
               .code;
  t.seconds = clock.Seconds();
  if (fs::exists(out / "train_report.json")) {
    t.report = Json::parse(ReadText(out / "train_report.json"));
  }
  for (const auto& row : CsvRows(out / "loss_curve.csv")) t.val.push_back(std::stod(row.at(3)));
  return t;
}

double MeanOf(const std::vector<double>& v, std::size_t from, std::size_t to) {
  double s = 0.0;
  for (std::size_t i = from; i < to; ++i) s += v[i];
  return s / static_cast<double>(to - from);
}

Outcome DeskLearning() {
  const auto& desk = Desk();
  if (!desk.error.empty()) return {false, desk.error};

  // Window counts over every split, independent of the trainer.
  const auto cfg = RunConfig::FromFile(desk.config.string());
  const auto patients = ReadPatientDirectory(desk.root / "pre/data");
  const auto ds = BuildDataset(patients, cfg.dataset_options(), 0);
  std::map<ActivityLabel, std::size_t> per_activity;
  for (const auto& w : ds.windows) ++per_activity[w.window.anchor_activity];
  std::size_t min_per_activity = ds.windows.size();
  for (auto a : kAllActivities) min_per_activity = std::min(min_per_activity, per_activity[a]);
  const bool data_ok = ds.windows.size() >= 300 && min_per_activity > 0;

  const auto routed = Train(desk.config, WorkRoot() / "desk/train_routed");
  const auto vanilla_cfg = DerivedConfig("desk_vanilla.json", [](Json& j) {
    j["model"]["activity_routing"] = false;
    j["model"]["activity_embeddings"] = false;
  });
  const auto vanilla = Train(vanilla_cfg, WorkRoot() / "desk/train_vanilla");
  if (routed.code != 0 || vanilla.code != 0 || routed.val.size() < 10) {
    return {false, "training failed: routed exit " + std::to_string(routed.code) +
                       ", vanilla exit " + std::to_string(vanilla.code)};
  }

  const auto& v = routed.val;
  const double best = *std::min_element(v.begin(), v.end());
  const bool converged =
      best < 0.75 * v.front() && MeanOf(v, v.size() - 5, v.size()) <= MeanOf(v, 0, 5);
  const auto& overall = routed.report.at("test").at("overall");
  const double mae = overall.at("mae"), r2 = overall.at("r2");
  const double vanilla_mae = vanilla.report.at("test").at("overall").at("mae");
  const bool quality = mae < 8.0 && r2 > 0.6 && routed.seconds < 1800.0;
  const bool ordering = vanilla_mae > mae;
  std::string detail = std::to_string(ds.windows.size()) + " windows, min " +
                       std::to_string(min_per_activity) + " per activity; val loss " +
                       Fmt("%.3f", v.front()) + " -> best " + Fmt("%.3f", best) + " over " +
                       std::to_string(v.size()) + " epochs; test MAE " + Fmt("%.3f", mae) +
                       ", R2 " + Fmt("%.3f", r2) + ", " + Fmt("%.0f", routed.seconds) +
                       " s; vanilla MAE " + Fmt("%.3f", vanilla_mae) + ", " +
                       Fmt("%.0f", vanilla.seconds) + " s";
  std::string failed;
  if (!data_ok) failed += " data";
  if (!converged) failed += " convergence";
  if (!quality) failed += " accuracy";
  if (!ordering) failed += " vanilla-not-worse";
  if (!failed.empty()) detail += "; failed:" + failed;
  return {data_ok && converged && quality && ordering, detail};
}

// ---------------------------------------------------------------------------
// 8. Sweep harness on the desk configuration.

Outcome SweepHarness() {
  const auto& desk = Desk();
  if (!desk.error.empty()) return {false, desk.error};
  static constexpr int kSweepEpochs = 5;
  const auto config = DerivedConfig("desk_sweep.json", [](Json& j) {
    j["training"]["epochs"] = kSweepEpochs;
    j["training"]["lr_milestones"] = Json::array();
  });
  const fs::path out = WorkRoot() / "desk/sweep";
  fs::remove_all(out);
  const auto r = CliLogged({"sweep", "--config", config.string(), "--axis", "all", "--timing",
                            "--data", (desk.root / "pre/data").string(), "--out", out.string()},
                           WorkRoot() / "desk/sweep.log");
  if (r.code != 0) return {false, "sweep exit " + std::to_string(r.code)};

  bool ok = true;
  std::string detail;
  const std::map<std::string, std::size_t> expected = {
      {"schedule", 3}, {"steps", 3}, {"loss", 4}};
  for (const auto& [axis, cells] : expected) {
    const auto rows = CsvRows(out / ("sweep_" + axis + ".csv"));
    const bool json_ok = fs::exists(out / ("sweep_" + axis + ".json"));
    bool finite = rows.size() == cells;
    for (const auto& row : rows) finite = finite && std::isfinite(std::stod(row.at(7)));
    ok = ok && json_ok && finite;
    detail += axis + " " + std::to_string(rows.size()) + "/" + std::to_string(cells) + " rows; ";
  }

  std::map<double, double> per_window;  // steps -> seconds per window
  for (const auto& row : CsvRows(out / "sweep_steps_timing.csv")) {
    per_window[std::stod(row.at(1))] = std::stod(row.at(3));
  }
  if (per_window.size() != 3 || per_window.begin()->second <= 0.0) {
    return {false, detail + "timing rows missing"};
  }
  const auto [s0, t0] = *per_window.begin();
  double worst = 0.0;
  for (const auto& [s, t] : per_window) {
    const double ratio = (t / s) / (t0 / s0);
    worst = std::max(worst, std::abs(ratio - 1.0));
    detail += "S=" + Fmt("%.0f", s) + " " + Fmt("%.3f", t) + " s/window; ";
  }
  const bool linear = worst <= 0.30;
  detail += "max deviation from linear " + Fmt("%.0f", 100.0 * worst) + "% (" +
            std::to_string(kSweepEpochs) + " epochs per cell)";
  return {ok && linear, detail};
}

// ---------------------------------------------------------------------------
// 9. Generator fidelity.

Outcome GeneratorFidelity() {
  const auto& desk = Desk();
  if (!desk.error.empty()) return {false, desk.error};
  // Median HR per activity of the reference cohort.
  const std::map<ActivityLabel, double> targets = {
      {ActivityLabel::kWalking, 99},         {ActivityLabel::kRunning, 128},
      {ActivityLabel::kAerobicWorkout, 112}, {ActivityLabel::kOutdoorBiking, 90},
      {ActivityLabel::kSport, 105},          {ActivityLabel::kSwimming, 110},
      {ActivityLabel::kTreadmill, 75}};
  const auto patients = ReadPatientDirectory(desk.root / "gen/data");
  std::map<ActivityLabel, std::vector<double>> hr_by_activity;
  SuddenChangeStats sudden;
  for (const auto& p : patients) {
    std::map<std::int64_t, double> by_minute;
    for (const auto& s : p.hr) by_minute[s.t.minutes] = s.bpm;
    for (const auto& seg : p.segments) {
      for (std::int64_t m = seg.start.minutes; m < seg.start.minutes + seg.duration; ++m) {
        const auto it = by_minute.find(m);
        if (it != by_minute.end()) hr_by_activity[seg.label].push_back(it->second);
      }
    }
    std::vector<double> run;
    std::int64_t prev = 0;
    for (const auto& [m, hr] : by_minute) {
      if (!run.empty() && m != prev + 1) {
        sudden.Accumulate(ComputeSuddenChanges(run));
        run.clear();
      }
      run.push_back(hr);
      prev = m;
    }
    if (!run.empty()) sudden.Accumulate(ComputeSuddenChanges(run));
  }
  sudden.Finalize();

  bool ok = true;
  std::string detail;
  for (const auto& [label, target] : targets) {
    auto v = hr_by_activity[label];
    if (v.empty()) {
      ok = false;
      detail += std::string(ActivityName(label)) + " missing; ";
      continue;
    }
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    const double median = n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    ok = ok && std::abs(median - target) <= 5.0;
    detail += std::string(ActivityName(label)) + " " + Fmt("%.1f", median) + "/" +
              Fmt("%.0f", target) + "; ";
  }
  const bool sudden_ok = sudden.fraction >= 0.10 && sudden.fraction <= 0.18 &&
                         std::abs(sudden.mean_magnitude - 13.0) <= 3.0;
  detail += "sudden-change fraction " + Fmt("%.3f", sudden.fraction) + ", mean magnitude " +
            Fmt("%.2f", sudden.mean_magnitude) + " BPM";
  return {ok && sudden_ok, detail};
}

// ---------------------------------------------------------------------------
// 10. Determinism of the full pipeline.

Outcome PipelineDeterminism() {
  const fs::path root = WorkRoot() / "determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  fixture::WriteFile(root / "run.json", fixture::TinyRunConfig());
  const auto a = fixture::RunPipeline(root / "a", root / "run.json", "2026");
  const auto b = fixture::RunPipeline(root / "b", root / "run.json", "2026");
  if (a.code != 0 || b.code != 0) return {false, "pipeline failed: " + a.err + b.err};
  const auto diff = fixture::FirstDifference(root / "a", root / "b");
  const std::size_t files = fixture::ReadTree(root / "a").size();
  return {diff.empty(), std::to_string(files) + " files compared" +
                            (diff.empty() ? ", all byte-identical" : ", first difference " + diff)};
}

struct Criterion {
  int id;
  const char* name;
  Outcome (*run)();
};

constexpr Criterion kCriteria[] = {
    {1, "feature streams match brute force", FeatureStreams},
    {2, "schedule identities", ScheduleIdentitiesAll},
    {3, "laplace sampler statistics", LaplaceMoments},
    {4, "gradient checks", GradientChecks},
    {5, "causality and routing", CausalityAndRouting},
    {6, "cheating denoiser round trip", CheatingDenoiser},
    {7, "desk-scale learning", DeskLearning},
    {8, "sweep harness", SweepHarness},
    {9, "generator fidelity", GeneratorFidelity},
    {10, "pipeline determinism", PipelineDeterminism},
};

}  // namespace
}  // namespace hrdiff

int main(int argc, char** argv) {
  using namespace hrdiff;
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  fs::create_directories(WorkRoot());
  int failures = 0;
  for (const auto& c : kCriteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const Clock clock;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << "criterion " << c.id << ' ' << (o.pass ? "PASS" : "FAIL") << ' ' << c.name
              << " [" << Fmt("%.1f", clock.Seconds()) << " s]: " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
