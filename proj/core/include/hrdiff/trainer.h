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

// Training loop, test-split evaluation by full reverse diffusion, and the
// end-to-end experiment used by the CLI, the sweep and the acceptance suite.

#ifndef HRDIFF_TRAINER_H_
#define HRDIFF_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hrdiff/dataset.h"
#include "hrdiff/diffusion.h"
#include "hrdiff/hr_transformer.h"
#include "hrdiff/metrics.h"
#include "hrdiff/schedule.h"

namespace hrdiff {

struct TrainConfig {
  std::size_t epochs = 400;
  std::size_t batch_size = 32;
  double learning_rate = 1e-3;
  double weight_decay = 1e-4;
  std::vector<std::size_t> lr_milestones = {200, 300};
  double lr_gamma = 0.1;
  std::size_t patience = 50;  // 0 disables early stopping
  double min_delta = 0.0;
  LossConfig loss;
  ScheduleKind schedule = ScheduleKind::kCosine;
  std::size_t diffusion_steps = 50;
  std::size_t forecast_samples = 10;  // K
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double learning_rate = 0.0;
  double train_loss = 0.0;
  double val_loss = 0.0;
};

struct TrainReport {
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;  // 0: initial weights kept
  double best_val_loss = 0.0;
  bool early_stopped = false;
  std::size_t stop_epoch = 0;
  std::size_t skipped_steps = 0;  // non-finite gradients
  bool diverged = false;
  std::string divergence_note;
  double seconds = 0.0;
};

// Owns encoded inputs so TrainingExample pointers stay valid.
struct EncodedWindows {
  std::vector<ModelInput> inputs;
  std::vector<std::vector<double>> targets;

  std::vector<TrainingExample> Examples() const;
};

EncodedWindows EncodeAll(std::span<const WindowRecord* const> windows,
                         const Normalizer& normalizer);

// Mean diffusion loss over `examples` with a fixed noise stream and no
// dropout, so repeated calls on the same weights agree.
double EvaluateLoss(const HrTransformer& model, std::span<const TrainingExample> examples,
                    const DiffusionSchedule& schedule, const TrainConfig& config,
                    std::uint64_t seed);

// Trains in place. The weights with the best validation loss are restored at
// the end (the training loss stands in when there is no validation data).
// A non-finite training loss stops training with diverged = true.
TrainReport TrainModel(HrTransformer& model, std::span<const TrainingExample> train,
                       std::span<const TrainingExample> validation,
                       const TrainConfig& config, std::uint64_t seed,
                       const std::function<void(const EpochRecord&)>& on_epoch = {});

struct WindowForecast {
  std::string patient_id;
  ActivityLabel anchor = ActivityLabel::kNone;
  std::vector<double> predicted_bpm;
  std::vector<double> true_bpm;
};

struct ActivityMetrics {
  ActivityLabel label = ActivityLabel::kNone;
  std::size_t windows = 0;
  MetricSet metrics;
};

struct Evaluation {
  MetricSet overall;
  std::vector<ActivityMetrics> per_activity;  // labels present, in label order
  std::vector<WindowForecast> forecasts;
  double seconds = 0.0;
};

inline constexpr double kMinForecastBpm = 30.0;
inline constexpr double kMaxForecastBpm = 220.0;

// Median-of-K forecasts de-normalised to BPM and clipped to [30, 220].
// Window i uses chain seeds derived from (seed, i).
Evaluation EvaluateForecasts(const HrTransformer& model,
                             std::span<const WindowRecord* const> windows,
                             const Normalizer& normalizer, const DiffusionSchedule& schedule,
                             std::size_t samples, std::uint64_t seed);

struct ExperimentResult {
  std::unique_ptr<HrTransformer> model;
  Normalizer normalizer;
  TrainReport train;
  Evaluation test;
  std::size_t train_windows = 0;
  std::size_t validation_windows = 0;
  std::size_t test_windows = 0;
};

// Fits the normalizer on the training split, trains a freshly initialised
// model and evaluates it on the test split. Streams are derived from `seed`.
ExperimentResult RunExperiment(const Dataset& dataset, const ModelConfig& model_config,
                               const TrainConfig& train_config, std::uint64_t seed,
                               const std::function<void(const EpochRecord&)>& on_epoch = {});

}  // namespace hrdiff

#endif  // HRDIFF_TRAINER_H_
