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

#include "hrdiff/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "hrdiff/optim.h"

namespace hrdiff {
namespace {

double SecondsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::vector<TrainingExample> EncodedWindows::Examples() const {
  std::vector<TrainingExample> out;
  out.reserve(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) out.push_back({&inputs[i], targets[i]});
  return out;
}

EncodedWindows EncodeAll(std::span<const WindowRecord* const> windows,
                         const Normalizer& normalizer) {
  EncodedWindows out;
  out.inputs.reserve(windows.size());
  out.targets.reserve(windows.size());
  for (const auto* w : windows) {
    out.inputs.push_back(EncodeWindow(w->window, normalizer));
    out.targets.push_back(EncodeTarget(w->window, normalizer));
  }
  return out;
}

double EvaluateLoss(const HrTransformer& model, std::span<const TrainingExample> examples,
                    const DiffusionSchedule& schedule, const TrainConfig& config,
                    std::uint64_t seed) {
  if (examples.empty()) return std::numeric_limits<double>::quiet_NaN();
  NoGradGuard no_grad;
  const TransformerNoisePredictor predictor(model);
  Rng rng = Rng::Derive(seed, "validation-noise");
  const ForwardContext ctx;
  const std::size_t bs = std::max<std::size_t>(1, config.batch_size);
  double total = 0.0;
  for (std::size_t i = 0; i < examples.size(); i += bs) {
    const std::size_t n = std::min(bs, examples.size() - i);
    const Tensor loss =
        DiffusionLoss(predictor, examples.subspan(i, n), schedule, config.loss, rng, ctx);
    total += loss.item() * static_cast<double>(n);
  }
  return total / static_cast<double>(examples.size());
}

TrainReport TrainModel(HrTransformer& model, std::span<const TrainingExample> train,
                       std::span<const TrainingExample> validation,
                       const TrainConfig& config, std::uint64_t seed,
                       const std::function<void(const EpochRecord&)>& on_epoch) {
  const auto start = std::chrono::steady_clock::now();
  TrainReport report;
  if (config.epochs == 0) return report;
  if (train.empty()) throw std::invalid_argument("training split is empty");
  if (config.batch_size == 0) throw std::invalid_argument("batch size must be >= 1");

  const auto schedule = DiffusionSchedule::Build(config.schedule, config.diffusion_steps);
  const TransformerNoisePredictor predictor(model);
  Adam adam(model.parameters().tensors(),
            {config.learning_rate, 0.9, 0.999, 1e-8, config.weight_decay});
  const MultiStepLr lr_schedule(config.learning_rate, config.lr_milestones, config.lr_gamma);
  EarlyStopping stopper(config.patience, config.min_delta);
  Rng rng = Rng::Derive(seed, "train");
  ForwardContext ctx{true, model.config().dropout, &rng};

  auto best_weights = model.parameters().Export();
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<TrainingExample> batch;

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    EpochRecord rec;
    rec.epoch = epoch;
    rec.learning_rate = lr_schedule.LrAt(epoch);
    adam.set_lr(rec.learning_rate);
    rng.Shuffle(order);
    double total = 0.0;
    for (std::size_t i = 0; i < order.size(); i += config.batch_size) {
      const std::size_t n = std::min(config.batch_size, order.size() - i);
      batch.clear();
      for (std::size_t j = 0; j < n; ++j) batch.push_back(train[order[i + j]]);
      adam.ZeroGrad();
      const Tensor loss = DiffusionLoss(predictor, batch, schedule, config.loss, rng, ctx);
      if (!std::isfinite(loss.item())) {
        report.diverged = true;
        report.divergence_note = "non-finite training loss at epoch " + std::to_string(epoch);
        break;
      }
      loss.Backward();
      adam.Step();
      total += loss.item() * static_cast<double>(n);
    }
    adam.ZeroGrad();
    if (report.diverged) {
      report.stop_epoch = epoch;
      break;
    }
    rec.train_loss = total / static_cast<double>(train.size());
    rec.val_loss = validation.empty()
                       ? rec.train_loss
                       : EvaluateLoss(model, validation, schedule, config, seed);
    report.history.push_back(rec);
    const bool stop = stopper.Update(rec.val_loss);
    if (stopper.improved_last()) best_weights = model.parameters().Export();
    if (on_epoch) on_epoch(rec);
    if (stop) {
      report.early_stopped = true;
      report.stop_epoch = epoch;
      break;
    }
  }
  model.parameters().Import(best_weights);
  report.best_epoch = stopper.best_epoch();
  report.best_val_loss = report.history.empty() ? 0.0 : stopper.best();
  if (!report.early_stopped && !report.diverged) report.stop_epoch = report.history.size();
  report.skipped_steps = static_cast<std::size_t>(adam.skipped_steps());
  report.seconds = SecondsSince(start);
  return report;
}

Evaluation EvaluateForecasts(const HrTransformer& model,
                             std::span<const WindowRecord* const> windows,
                             const Normalizer& normalizer, const DiffusionSchedule& schedule,
                             std::size_t samples, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  Evaluation ev;
  const TransformerNoisePredictor predictor(model);
  std::vector<double> all_true, all_pred;
  std::map<std::size_t, std::pair<std::vector<double>, std::vector<double>>> by_activity;
  std::map<std::size_t, std::size_t> windows_by_activity;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const auto& w = windows[i]->window;
    const ModelInput input = EncodeWindow(w, normalizer);
    ForecastOptions opts;
    opts.samples = samples;
    opts.seed = MixSeed(seed ^ MixSeed(i + 1));
    const auto z = ForecastNormalized(predictor, input, schedule, w.target.size(), opts);
    WindowForecast f;
    f.patient_id = windows[i]->patient_id;
    f.anchor = w.anchor_activity;
    for (std::size_t t = 0; t < z.size(); ++t) {
      const double bpm =
          std::clamp(normalizer.DenormalizeHr(z[t]), kMinForecastBpm, kMaxForecastBpm);
      f.predicted_bpm.push_back(bpm);
      f.true_bpm.push_back(w.target[t].hr);
    }
    const std::size_t a = ActivityIndex(f.anchor);
    auto& [yt, yp] = by_activity[a];
    yt.insert(yt.end(), f.true_bpm.begin(), f.true_bpm.end());
    yp.insert(yp.end(), f.predicted_bpm.begin(), f.predicted_bpm.end());
    ++windows_by_activity[a];
    all_true.insert(all_true.end(), f.true_bpm.begin(), f.true_bpm.end());
    all_pred.insert(all_pred.end(), f.predicted_bpm.begin(), f.predicted_bpm.end());
    ev.forecasts.push_back(std::move(f));
  }
  if (!all_true.empty()) ev.overall = ComputeMetrics(all_true, all_pred);
  for (const auto& [a, yy] : by_activity) {
    ev.per_activity.push_back({static_cast<ActivityLabel>(a), windows_by_activity[a],
                               ComputeMetrics(yy.first, yy.second)});
  }
  ev.seconds = SecondsSince(start);
  return ev;
}

ExperimentResult RunExperiment(const Dataset& dataset, const ModelConfig& model_config,
                               const TrainConfig& train_config, std::uint64_t seed,
                               const std::function<void(const EpochRecord&)>& on_epoch) {
  const auto train_w = dataset.Partitioned(Partition::kTrain);
  const auto val_w = dataset.Partitioned(Partition::kValidation);
  const auto test_w = dataset.Partitioned(Partition::kTest);
  if (train_w.empty()) throw std::invalid_argument("training split is empty");

  ExperimentResult result;
  result.train_windows = train_w.size();
  result.validation_windows = val_w.size();
  result.test_windows = test_w.size();
  result.normalizer = Normalizer::Fit(train_w);
  result.model = std::make_unique<HrTransformer>(model_config,
                                                 MixSeed(seed ^ Fnv1a64("model-init")));
  const auto train_enc = EncodeAll(train_w, result.normalizer);
  const auto val_enc = EncodeAll(val_w, result.normalizer);
  const auto train_ex = train_enc.Examples();
  const auto val_ex = val_enc.Examples();
  result.train = TrainModel(*result.model, train_ex, val_ex, train_config, seed, on_epoch);
  const auto schedule =
      DiffusionSchedule::Build(train_config.schedule, train_config.diffusion_steps);
  result.test = EvaluateForecasts(*result.model, test_w, result.normalizer, schedule,
                                  train_config.forecast_samples,
                                  MixSeed(seed ^ Fnv1a64("test-forecast")));
  return result;
}

}  // namespace hrdiff
