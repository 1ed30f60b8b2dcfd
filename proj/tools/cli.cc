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

#include "cli.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "hrdiff/checkpoint.h"
#include "hrdiff/config.h"
#include "hrdiff/csv_io.h"
#include "hrdiff/dataset.h"
#include "hrdiff/diffusion.h"
#include "hrdiff/metrics.h"
#include "hrdiff/preprocess.h"
#include "hrdiff/rng.h"
#include "hrdiff/sweep.h"
#include "hrdiff/synthgen.h"
#include "hrdiff/trainer.h"
#include "json.hpp"

namespace hrdiff::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr std::string_view kWindowsHeader =
    "window_id,anchor,role,step,timestamp_iso8601,hr_bpm,gradient,rolling_std,ema,trend,"
    "activity,sedentary,lightly_active,fairly_active,very_active";
constexpr std::string_view kForecastHeader = "window_id,step,hr_pred_bpm,hr_true_bpm";

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string data;
  std::string checkpoint;
  std::string windows;
  std::string axis = "all";
  bool timing = false;
};

// Loaded configuration plus the provenance stamped on every artifact.
struct Context {
  RunConfig config;
  std::string hash;
  fs::path out;
  std::ostream* log = nullptr;

  Json Meta() const {
    return {{"tool", "hrdiff"},
            {"version", kToolVersion},
            {"config_hash", hash},
            {"seed", config.seed}};
  }
  std::string Preamble() const {
    return "# hrdiff " + std::string(kToolVersion) + " config_hash=" + hash +
           " seed=" + std::to_string(config.seed) + "\n";
  }
};

Context MakeContext(const CommonOptions& opts, std::ostream& log) {
  Context ctx;
  ctx.config = opts.config.empty() ? RunConfig{} : RunConfig::FromFile(opts.config);
  if (opts.seed) ctx.config.seed = *opts.seed;
  ctx.hash = ctx.config.HashHex();
  ctx.out = opts.out;
  ctx.log = &log;
  fs::create_directories(ctx.out);
  return ctx;
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write", path.string());
  out << text;
}

void WriteJson(const fs::path& path, const Json& j) { WriteText(path, j.dump(2) + "\n"); }

// Resolved configuration, written by every subcommand.
void WriteConfig(const Context& ctx) {
  Json j = Json::parse(ctx.config.ToJson());
  Json out = {{"meta", ctx.Meta()}, {"config", j}};
  WriteJson(ctx.out / "config.json", out);
}

std::string Num(double v) { return FormatDouble(v); }

std::uint64_t SplitSeed(const RunConfig& c) { return MixSeed(c.seed ^ Fnv1a64("split")); }

std::vector<PatientData> LoadPatients(const std::string& dir) {
  if (dir.empty()) throw DataError("--data is required");
  auto patients = ReadPatientDirectory(dir);
  if (patients.empty()) throw DataError("no *_series.csv files found", dir);
  return patients;
}

Dataset LoadDataset(const Context& ctx, const std::string& dir) {
  const auto patients = LoadPatients(dir);
  auto ds = BuildDataset(patients, ctx.config.dataset_options(), SplitSeed(ctx.config));
  if (ds.windows.empty()) throw DataError("no windows could be built", dir);
  *ctx.log << "dataset: " << ds.windows.size() << " windows from " << ds.segments
           << " segments\n";
  return ds;
}

Json MetricsJson(const MetricSet& m) {
  Json j = {{"count", m.count}, {"mae", m.mae}, {"mape", m.mape}, {"rmse", m.rmse}};
  if (m.r2) {
    j["r2"] = *m.r2;
  } else {
    j["r2"] = nullptr;
    j["r2_note"] = m.r2_note;
  }
  return j;
}

Json ReferenceJson() {
  const ReferenceMetrics r;
  return {{"mae", r.mae},
          {"mape", r.mape},
          {"rmse", r.rmse},
          {"r2", r.r2},
          {"reproducible", false},
          {"note", "private-cohort figures, shown for orientation only"}};
}

Json EvaluationJson(const Evaluation& ev) {
  Json per = Json::array();
  for (const auto& a : ev.per_activity) {
    Json row = MetricsJson(a.metrics);
    row["activity"] = std::string(ActivityName(a.label));
    row["windows"] = a.windows;
    per.push_back(row);
  }
  return {{"overall", MetricsJson(ev.overall)}, {"per_activity", per}, {"reference", ReferenceJson()}};
}

std::string PerActivityCsv(const Evaluation& ev, const std::string& preamble) {
  std::ostringstream s;
  s << preamble << "activity,windows,mae,mape,rmse,r2\n";
  auto row = [&](std::string_view name, std::size_t windows, const MetricSet& m) {
    s << name << ',' << windows << ',' << Num(m.mae) << ',' << Num(m.mape) << ','
      << Num(m.rmse) << ',' << (m.r2 ? Num(*m.r2) : "") << '\n';
  };
  for (const auto& a : ev.per_activity) row(ActivityName(a.label), a.windows, a.metrics);
  row("overall", ev.forecasts.size(), ev.overall);
  return s.str();
}

std::string ForecastCsv(const std::vector<WindowForecast>& forecasts,
                        const std::string& preamble) {
  std::ostringstream s;
  s << preamble << kForecastHeader << '\n';
  for (std::size_t w = 0; w < forecasts.size(); ++w) {
    const auto& f = forecasts[w];
    for (std::size_t t = 0; t < f.predicted_bpm.size(); ++t) {
      s << w << ',' << t << ',' << Num(f.predicted_bpm[t]) << ',';
      if (t < f.true_bpm.size() && std::isfinite(f.true_bpm[t])) s << Num(f.true_bpm[t]);
      s << '\n';
    }
  }
  return s.str();
}

// ---------------------------------------------------------------------------
// Window CSV: one row per source or target step.

std::string WindowsCsv(std::span<const WindowRecord* const> windows,
                       const std::string& preamble) {
  std::ostringstream s;
  s << preamble << kWindowsHeader << '\n';
  for (std::size_t w = 0; w < windows.size(); ++w) {
    const auto& win = windows[w]->window;
    const auto anchor = ActivityName(win.anchor_activity);
    for (std::size_t t = 0; t < win.source.size(); ++t) {
      const auto& f = win.source[t];
      s << w << ',' << anchor << ",source," << t << ',' << FormatIso8601(f.t) << ','
        << Num(f.hr) << ',' << Num(f.gradient) << ',' << Num(f.rolling_std) << ','
        << Num(f.ema) << ',' << Num(f.trend) << ',' << ActivityName(f.activity);
      for (double v : f.intensity) s << ',' << Num(v);
      s << '\n';
    }
    for (std::size_t t = 0; t < win.target.size(); ++t) {
      const auto& p = win.target[t];
      s << w << ',' << anchor << ",target," << t << ',' << FormatIso8601(p.t) << ','
        << Num(p.hr) << ",,,,," << ActivityName(p.activity) << ",,,,\n";
    }
  }
  return s.str();
}

double ParseNumber(const std::string& s, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || !std::isfinite(v)) {
    throw DataError("not a number: '" + s + "'", where);
  }
  return v;
}

std::vector<FeatureWindow> ReadWindowsCsv(const std::string& path, std::size_t window) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open", path);
  std::string line;
  std::size_t row = 0;
  do {
    ++row;
    if (!std::getline(in, line)) throw DataError("missing header row", path + ":" + std::to_string(row));
  } while (!line.empty() && line.front() == '#');
  if (SplitCsvLine(line) != SplitCsvLine(kWindowsHeader)) {
    throw DataError("unexpected header, expected '" + std::string(kWindowsHeader) + "'",
                    path + ":" + std::to_string(row));
  }
  std::vector<FeatureWindow> windows;
  std::map<std::string, std::size_t> index;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const std::string where = path + ":" + std::to_string(row);
    const auto f = SplitCsvLine(line);
    if (f.size() != 15) {
      throw DataError("expected 15 columns, got " + std::to_string(f.size()), where);
    }
    auto [it, fresh] = index.emplace(f[0], windows.size());
    if (fresh) windows.emplace_back();
    auto& w = windows[it->second];
    try {
      w.anchor_activity = ParseActivity(f[1]);
      const Timestamp t = ParseIso8601(f[4]);
      const ActivityLabel activity = ParseActivity(f[10]);
      if (f[2] == "source") {
        FeatureVector v;
        v.t = t;
        v.hr = ParseNumber(f[5], where);
        v.gradient = ParseNumber(f[6], where);
        v.rolling_std = ParseNumber(f[7], where);
        v.ema = ParseNumber(f[8], where);
        v.trend = ParseNumber(f[9], where);
        v.activity = activity;
        for (std::size_t c = 0; c < kNumIntensityCategories; ++c) {
          v.intensity[c] = ParseNumber(f[11 + c], where);
        }
        v.temporal = ComputeTemporalFeatures(t);
        w.source.push_back(v);
      } else if (f[2] == "target") {
        const double hr = f[5].empty() ? std::nan("") : ParseNumber(f[5], where);
        w.target.push_back({t, hr, activity});
      } else {
        throw DataError("role must be 'source' or 'target'", where);
      }
    } catch (const DataError&) {
      throw;
    } catch (const std::exception& e) {
      throw DataError(e.what(), where);
    }
  }
  for (const auto& [id, i] : index) {
    if (windows[i].source.size() != window || windows[i].target.size() != window) {
      throw DataError("window '" + id + "' needs " + std::to_string(window) +
                          " source and target rows",
                      path);
    }
  }
  return windows;
}

// ---------------------------------------------------------------------------
// Checkpoints carry the model config, the normalizer and the run config.

void SaveModel(const Context& ctx, const fs::path& path, const HrTransformer& model,
               const Normalizer& normalizer) {
  Json header = {{"meta", ctx.Meta()},
                 {"model", Json::parse(model.config().ToJson())},
                 {"normalizer", Json::parse(normalizer.ToJson())},
                 {"run", Json::parse(ctx.config.ToJson(false))}};
  SaveCheckpoint(path.string(), {header.dump(), model.parameters().Export()});
}

struct LoadedModel {
  std::unique_ptr<HrTransformer> model;
  Normalizer normalizer;
  RunConfig trained_with;
};

LoadedModel LoadModel(const std::string& path) {
  if (path.empty()) throw DataError("--checkpoint is required");
  Checkpoint ckpt;
  try {
    ckpt = LoadCheckpoint(path);
  } catch (const std::runtime_error& e) {
    throw DataError(e.what(), path);
  }
  LoadedModel m;
  try {
    const auto header = Json::parse(ckpt.config);
    const auto cfg = ModelConfig::FromJson(header.at("model").dump());
    m.normalizer = Normalizer::FromJson(header.at("normalizer").dump());
    m.trained_with = RunConfig::FromJson(header.at("run").dump());
    m.model = std::make_unique<HrTransformer>(cfg, 0);
    m.model->parameters().Import(ckpt.arrays);
  } catch (const std::exception& e) {
    throw DataError(std::string("unusable checkpoint: ") + e.what(), path);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Subcommands.

int CmdGenerate(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  Context ctx = MakeContext(opts, err);
  WriteConfig(ctx);
  const auto gen = ctx.config.generator_config();
  const auto patients = Generate(gen);
  const fs::path data = ctx.out / "data";
  std::array<std::size_t, kNumActivities> counts{};
  std::vector<double> hr_by_activity[kNumActivities];
  SuddenChangeStats sudden;
  std::size_t minutes = 0;
  for (const auto& p : patients) {
    WritePatient(data, p, ctx.Preamble());
    for (const auto& s : p.segments) ++counts[ActivityIndex(s.label)];
    const auto labelled = LabelSeries(FuseSeries(p.hr, p.intensity), p.segments);
    minutes += labelled.size();
    for (const auto& run : SplitContiguousRuns(labelled)) {
      sudden.Accumulate(ComputeSuddenChanges(run, ctx.config.preprocess.sudden));
      for (const auto& s : run) {
        if (s.activity != ActivityLabel::kNone) {
          hr_by_activity[ActivityIndex(s.activity)].push_back(s.hr);
        }
      }
    }
  }
  sudden.Finalize();
  Json acts = Json::array();
  for (std::size_t a = 0; a < kNumActivities; ++a) {
    Json row = {{"activity", std::string(ActivityName(static_cast<ActivityLabel>(a)))},
                {"segments", counts[a]}};
    row["median_hr"] = hr_by_activity[a].empty() ? Json(nullptr)
                                                 : Json(Median(hr_by_activity[a]));
    acts.push_back(row);
  }
  Json report = {{"meta", ctx.Meta()},
                 {"patients", patients.size()},
                 {"minutes", minutes},
                 {"activities", acts},
                 {"sudden_change_fraction", sudden.fraction},
                 {"sudden_change_mean_magnitude", sudden.mean_magnitude}};
  WriteJson(ctx.out / "generate_report.json", report);
  out << "generated " << patients.size() << " patients into " << data.string() << "\n";
  return kExitOk;
}

int CmdPreprocess(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  Context ctx = MakeContext(opts, err);
  WriteConfig(ctx);
  const auto patients = LoadPatients(opts.data);
  const fs::path data = ctx.out / "data";
  std::vector<PreprocessReport> reports;
  Json per = Json::array();
  for (const auto& p : patients) {
    const auto result = PreprocessPatient(p, ctx.config.preprocess,
                                          MixSeed(ctx.config.seed ^ Fnv1a64(p.id)));
    WritePatient(data, result.cleaned, ctx.Preamble());
    reports.push_back(result.report);
    Json r = Json::parse(ReportToJson(result.report));
    per.push_back({{"patient", p.id}, {"report", r}});
  }
  Json report = {{"meta", ctx.Meta()},
                 {"overall", Json::parse(ReportToJson(MergeReports(reports)))},
                 {"patients", per}};
  WriteJson(ctx.out / "preprocess_report.json", report);
  out << "preprocessed " << patients.size() << " patients into " << data.string() << "\n";
  return kExitOk;
}

int CmdTrain(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  Context ctx = MakeContext(opts, err);
  WriteConfig(ctx);
  const Dataset ds = LoadDataset(ctx, opts.data);
  const auto& cfg = ctx.config;
  auto result = RunExperiment(ds, cfg.model, cfg.training, cfg.seed, [&](const EpochRecord& r) {
    err << "epoch " << r.epoch << " lr " << r.learning_rate << " train " << r.train_loss
        << " val " << r.val_loss << "\n";
  });
  SaveModel(ctx, ctx.out / "model.ckpt", *result.model, result.normalizer);
  WriteText(ctx.out / "normalizer.json", result.normalizer.ToJson() + "\n");

  std::ostringstream curve;
  curve << ctx.Preamble() << "epoch,learning_rate,train_loss,val_loss\n";
  for (const auto& r : result.train.history) {
    curve << r.epoch << ',' << Num(r.learning_rate) << ',' << Num(r.train_loss) << ','
          << Num(r.val_loss) << '\n';
  }
  WriteText(ctx.out / "loss_curve.csv", curve.str());
  const auto test_w = ds.Partitioned(Partition::kTest);
  WriteText(ctx.out / "test_windows.csv", WindowsCsv(test_w, ctx.Preamble()));
  WriteText(ctx.out / "forecasts.csv", ForecastCsv(result.test.forecasts, ctx.Preamble()));

  const auto& tr = result.train;
  Json report = {{"meta", ctx.Meta()},
                 {"windows", {{"train", result.train_windows},
                              {"validation", result.validation_windows},
                              {"test", result.test_windows}}},
                 {"segments", ds.segments},
                 {"epochs_configured", cfg.training.epochs},
                 {"epochs_run", tr.history.size()},
                 {"best_epoch", tr.best_epoch},
                 {"best_val_loss", tr.best_val_loss},
                 {"early_stopped", tr.early_stopped},
                 {"stop_epoch", tr.stop_epoch},
                 {"skipped_steps", tr.skipped_steps},
                 {"diverged", tr.diverged},
                 {"test", EvaluationJson(result.test)}};
  if (tr.diverged) report["divergence_note"] = tr.divergence_note;
  if (opts.timing) {
    report["train_seconds"] = tr.seconds;
    report["test_seconds"] = result.test.seconds;
  }
  WriteJson(ctx.out / "train_report.json", report);
  if (tr.diverged) {
    err << "training diverged: " << tr.divergence_note
        << " (best weights so far were saved)\n";
    return kExitDiverged;
  }
  out << "test MAE " << Num(result.test.overall.mae) << " BPM over " << result.test_windows
      << " windows\n";
  return kExitOk;
}

int CmdForecast(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  Context ctx = MakeContext(opts, err);
  WriteConfig(ctx);
  const auto loaded = LoadModel(opts.checkpoint);
  if (opts.windows.empty()) throw DataError("--windows is required");
  const std::size_t l = loaded.model->config().window;
  const auto windows = ReadWindowsCsv(opts.windows, l);
  const auto& trained = loaded.trained_with.training;
  const auto schedule = DiffusionSchedule::Build(trained.schedule, trained.diffusion_steps);
  const std::size_t k = ctx.config.training.forecast_samples;
  const TransformerNoisePredictor predictor(*loaded.model);
  std::vector<WindowForecast> forecasts;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    ForecastOptions fo;
    fo.samples = k;
    fo.seed = MixSeed(ctx.config.seed ^ MixSeed(i + 1));
    const auto input = EncodeWindow(windows[i], loaded.normalizer);
    const auto z = ForecastNormalized(predictor, input, schedule, l, fo);
    WindowForecast f;
    f.anchor = windows[i].anchor_activity;
    for (std::size_t t = 0; t < z.size(); ++t) {
      f.predicted_bpm.push_back(std::clamp(loaded.normalizer.DenormalizeHr(z[t]),
                                           kMinForecastBpm, kMaxForecastBpm));
      f.true_bpm.push_back(windows[i].target[t].hr);
    }
    forecasts.push_back(std::move(f));
  }
  WriteText(ctx.out / "forecasts.csv", ForecastCsv(forecasts, ctx.Preamble()));
  Json run = {{"meta", ctx.Meta()},
              {"schedule_kind", std::string(ScheduleKindName(trained.schedule))},
              {"S", trained.diffusion_steps},
              {"K", k},
              {"seed", ctx.config.seed},
              {"windows", windows.size()}};
  WriteJson(ctx.out / "forecast_run.json", run);
  out << "forecast " << windows.size() << " windows\n";
  return kExitOk;
}

int CmdEvaluate(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  Context ctx = MakeContext(opts, err);
  WriteConfig(ctx);
  const auto loaded = LoadModel(opts.checkpoint);
  // Windowing follows the checkpoint so inputs fit the model.
  Context data_ctx = ctx;
  data_ctx.config.model = loaded.model->config();
  data_ctx.config.features = loaded.trained_with.features;
  data_ctx.config.split = loaded.trained_with.split;
  data_ctx.config.seed = loaded.trained_with.seed;
  const Dataset ds = LoadDataset(data_ctx, opts.data);
  const auto test_w = ds.Partitioned(Partition::kTest);
  if (test_w.empty()) throw DataError("test split is empty", opts.data);
  const auto& trained = loaded.trained_with.training;
  const auto schedule = DiffusionSchedule::Build(trained.schedule, trained.diffusion_steps);
  const auto ev = EvaluateForecasts(*loaded.model, test_w, loaded.normalizer, schedule,
                                    ctx.config.training.forecast_samples,
                                    MixSeed(ctx.config.seed ^ Fnv1a64("test-forecast")));
  Json report = {{"meta", ctx.Meta()},
                 {"windows", test_w.size()},
                 {"schedule_kind", std::string(ScheduleKindName(trained.schedule))},
                 {"S", trained.diffusion_steps},
                 {"K", ctx.config.training.forecast_samples},
                 {"test", EvaluationJson(ev)}};
  if (opts.timing) report["seconds"] = ev.seconds;
  WriteJson(ctx.out / "metrics.json", report);
  WriteText(ctx.out / "per_activity.csv", PerActivityCsv(ev, ctx.Preamble()));
  WriteText(ctx.out / "forecasts.csv", ForecastCsv(ev.forecasts, ctx.Preamble()));
  out << "test MAE " << Num(ev.overall.mae) << " BPM, RMSE " << Num(ev.overall.rmse)
      << " BPM over " << test_w.size() << " windows\n";
  return kExitOk;
}

int CmdSweep(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  std::vector<SweepAxis> axes;
  if (opts.axis == "all") {
    axes = {SweepAxis::kSchedule, SweepAxis::kSteps, SweepAxis::kLoss};
  } else {
    axes = {ParseSweepAxis(opts.axis)};
  }
  Context ctx = MakeContext(opts, err);
  WriteConfig(ctx);
  const Dataset ds = LoadDataset(ctx, opts.data);
  bool diverged = false;
  for (const auto axis : axes) {
    const std::string name(SweepAxisName(axis));
    const auto result = RunSweep(ds, ctx.config.model, ctx.config.training, axis,
                                 ctx.config.seed, [&](const SweepRow& r) {
                                   err << "sweep " << name << "=" << r.value << " MAE "
                                       << r.metrics.mae << "\n";
                                 });
    WriteText(ctx.out / ("sweep_" + name + ".csv"), ctx.Preamble() + SweepTableCsv(result));
    if (opts.timing) {
      WriteText(ctx.out / ("sweep_" + name + "_timing.csv"),
                ctx.Preamble() + SweepTimingCsv(result));
    }
    Json rows = Json::array();
    for (const auto& r : result.rows) {
      Json row = {{"value", r.value},
                  {"schedule", std::string(ScheduleKindName(r.schedule))},
                  {"steps", r.steps},
                  {"loss", r.loss},
                  {"seed", r.seed},
                  {"epochs_run", r.epochs_run},
                  {"best_val_loss", r.best_val_loss},
                  {"diverged", r.diverged},
                  {"metrics", MetricsJson(r.metrics)}};
      if (opts.timing) {
        row["train_seconds"] = r.train_seconds;
        row["inference_seconds_per_window"] = r.inference_seconds_per_window;
      }
      diverged = diverged || r.diverged;
      rows.push_back(row);
    }
    WriteJson(ctx.out / ("sweep_" + name + ".json"),
              {{"meta", ctx.Meta()}, {"axis", name}, {"rows", rows}});
    out << "sweep " << name << ": " << result.rows.size() << " cells\n";
  }
  return diverged ? kExitDiverged : kExitOk;
}

void AddCommon(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "JSON run configuration (defaults apply to omitted keys)");
  cmd->add_option("--seed", o.seed, "Seed for every random stream (overrides the config)");
  cmd->add_option("--out", o.out, "Output directory; nothing is written elsewhere")->required();
  cmd->add_flag("--timing", o.timing, "Also record wall-clock timings (not reproducible)");
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"hrdiff: activity-aware diffusion forecasting of wearable heart rate"};
  app.name("hrdiff");
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  CommonOptions o;

  auto* gen = app.add_subcommand("generate", "Write a synthetic patient cohort to <out>/data");
  AddCommon(gen, o);

  auto* pre = app.add_subcommand("preprocess", "Smooth, remove outliers and report sudden changes");
  AddCommon(pre, o);
  pre->add_option("--data", o.data, "Directory of <id>_series.csv / <id>_segments.csv")
      ->required();

  auto* train = app.add_subcommand("train", "Train a model and evaluate it on the test split");
  AddCommon(train, o);
  train->add_option("--data", o.data, "Patient data directory")->required();

  auto* fc = app.add_subcommand("forecast", "Forecast HR for windows from a window CSV");
  AddCommon(fc, o);
  fc->add_option("--checkpoint", o.checkpoint, "Checkpoint written by train")
      ->required();
  fc->add_option("--windows", o.windows, "Window CSV (see test_windows.csv from train)")
      ->required();

  auto* ev = app.add_subcommand("evaluate", "Evaluate a checkpoint on the test split of --data");
  AddCommon(ev, o);
  ev->add_option("--checkpoint", o.checkpoint, "Checkpoint written by train")
      ->required();
  ev->add_option("--data", o.data, "Patient data directory")->required();

  auto* sw = app.add_subcommand("sweep", "Schedule, step-count and loss ablations");
  AddCommon(sw, o);
  sw->add_option("--data", o.data, "Patient data directory")->required();
  sw->add_option("--axis", o.axis, "schedule, steps, loss or all")
      ->check(CLI::IsMember({"schedule", "steps", "loss", "all"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) return CmdGenerate(o, out, err);
    if (pre->parsed()) return CmdPreprocess(o, out, err);
    if (train->parsed()) return CmdTrain(o, out, err);
    if (fc->parsed()) return CmdForecast(o, out, err);
    if (ev->parsed()) return CmdEvaluate(o, out, err);
    if (sw->parsed()) return CmdSweep(o, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitUsage;
}

}  // namespace hrdiff::cli
