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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

namespace hrdiff {
namespace {

const Dataset& SharedDataset() {
  static const Dataset ds = [] {
    GeneratorConfig g;
    g.n_patients = 4;
    g.days_per_patient = 60;
    g.min_segments_per_activity = 1;
    g.seed = 5;
    return BuildDataset(Generate(g), {}, 8);
  }();
  return ds;
}

ModelConfig SmallModel() {
  ModelConfig c;
  c.d_model = 8;
  c.heads = 2;
  c.ff_dim = 16;
  c.window = 10;
  return c;
}

TrainConfig ShortTraining(std::size_t epochs) {
  TrainConfig t;
  t.epochs = epochs;
  t.diffusion_steps = 10;
  t.forecast_samples = 3;
  return t;
}

TEST(TrainerTest, ZeroEpochsKeepsInitialWeights) {
  const auto& ds = SharedDataset();
  const auto r = RunExperiment(ds, SmallModel(), ShortTraining(0), 1);
  EXPECT_TRUE(r.train.history.empty());
  EXPECT_EQ(r.train.best_epoch, 0u);
  const HrTransformer fresh(SmallModel(), MixSeed(1 ^ Fnv1a64("model-init")));
  EXPECT_EQ(r.model->parameters().Export()[0].values, fresh.parameters().Export()[0].values);
  EXPECT_EQ(r.test.forecasts.size(), r.test_windows);
  EXPECT_GT(r.test.overall.count, 0u);
}

TEST(TrainerTest, SameSeedGivesIdenticalCurvesAndForecasts) {
  const auto& ds = SharedDataset();
  const auto a = RunExperiment(ds, SmallModel(), ShortTraining(2), 3);
  const auto b = RunExperiment(ds, SmallModel(), ShortTraining(2), 3);
  ASSERT_EQ(a.train.history.size(), 2u);
  for (std::size_t e = 0; e < 2; ++e) {
    EXPECT_EQ(a.train.history[e].train_loss, b.train.history[e].train_loss);
    EXPECT_EQ(a.train.history[e].val_loss, b.train.history[e].val_loss);
  }
  ASSERT_EQ(a.test.forecasts.size(), b.test.forecasts.size());
  for (std::size_t i = 0; i < a.test.forecasts.size(); ++i) {
    EXPECT_EQ(a.test.forecasts[i].predicted_bpm, b.test.forecasts[i].predicted_bpm);
  }
  const auto c = RunExperiment(ds, SmallModel(), ShortTraining(2), 4);
  EXPECT_NE(a.train.history[0].train_loss, c.train.history[0].train_loss);
}

TEST(TrainerTest, ReportInvariants) {
  const auto& ds = SharedDataset();
  const auto r = RunExperiment(ds, SmallModel(), ShortTraining(3), 2);
  EXPECT_LE(r.train.history.size(), 3u);
  EXPECT_EQ(r.train.stop_epoch, r.train.history.size());
  EXPECT_GE(r.train.best_epoch, 1u);
  EXPECT_EQ(r.train.best_val_loss, r.train.history[r.train.best_epoch - 1].val_loss);
  EXPECT_LE(r.test.overall.mae, r.test.overall.rmse);
  double weighted = 0.0;
  std::size_t windows = 0;
  for (const auto& pa : r.test.per_activity) {
    weighted += pa.metrics.mae * static_cast<double>(pa.windows);
    windows += pa.windows;
    EXPECT_LE(pa.metrics.mae, pa.metrics.rmse);
  }
  EXPECT_EQ(windows, r.test_windows);
  EXPECT_NEAR(weighted / static_cast<double>(windows), r.test.overall.mae, 1e-9);
  for (const auto& f : r.test.forecasts) {
    for (double v : f.predicted_bpm) {
      EXPECT_GE(v, kMinForecastBpm);
      EXPECT_LE(v, kMaxForecastBpm);
    }
  }
}

TEST(TrainerTest, EarlyStoppingFires) {
  const auto& ds = SharedDataset();
  auto t = ShortTraining(40);
  t.patience = 1;
  t.min_delta = 10.0;  // nothing counts as an improvement after epoch 1
  const auto r = RunExperiment(ds, SmallModel(), t, 2);
  EXPECT_TRUE(r.train.early_stopped);
  EXPECT_EQ(r.train.stop_epoch, 2u);
  EXPECT_EQ(r.train.best_epoch, 1u);
}

TEST(TrainerTest, RejectsEmptyTraining) {
  const HrTransformer model(SmallModel(), 1);
  HrTransformer m(SmallModel(), 1);
  EXPECT_THROW(TrainModel(m, {}, {}, ShortTraining(1), 1), std::invalid_argument);
}

TEST(TrainerTest, DeskScaleOverfit) {
  const auto& ds = SharedDataset();
  std::vector<const WindowRecord*> windows;
  for (const auto& w : ds.windows) {
    if (windows.size() < 50) windows.push_back(&w);
  }
  ASSERT_EQ(windows.size(), 50u);
  ModelConfig c;
  c.d_model = 32;
  c.heads = 1;
  c.window = 10;
  c.dropout = 0.0;
  TrainConfig t;
  t.epochs = 300;
  t.batch_size = 8;
  t.weight_decay = 0.0;
  t.patience = 0;
  const auto normalizer = Normalizer::Fit(windows);
  const auto enc = EncodeAll(windows, normalizer);
  const auto examples = enc.Examples();
  HrTransformer model(c, 9);
  const auto report = TrainModel(model, examples, {}, t, 9);
  EXPECT_EQ(report.history.size(), 300u);
  const auto schedule = DiffusionSchedule::Build(t.schedule, t.diffusion_steps);
  const auto ev = EvaluateForecasts(model, windows, normalizer, schedule, 10, 9);
  EXPECT_LT(ev.overall.mae, 3.0);
}

}  // namespace
}  // namespace hrdiff
