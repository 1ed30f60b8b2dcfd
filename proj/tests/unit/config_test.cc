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

#include "hrdiff/config.h"

#include <gtest/gtest.h>

#include <string>

namespace hrdiff {
namespace {

TEST(RunConfigTest, EmptyObjectGivesDefaults) {
  const auto c = RunConfig::FromJson("{}");
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.model.d_model, 128u);
  EXPECT_EQ(c.model.heads, 8u);
  EXPECT_EQ(c.training.batch_size, 32u);
  EXPECT_EQ(c.training.epochs, 400u);
  EXPECT_DOUBLE_EQ(c.training.learning_rate, 1e-3);
  EXPECT_EQ(c.training.schedule, ScheduleKind::kCosine);
  EXPECT_EQ(c.training.diffusion_steps, 50u);
  EXPECT_EQ(c.training.loss.kind, LossKind::kL1);
  EXPECT_DOUBLE_EQ(c.preprocess.contamination, 0.05);
  EXPECT_EQ(c.generator.n_patients, 29u);
  EXPECT_NO_THROW(c.Validate());
}

TEST(RunConfigTest, OverridesAndRoundTrip) {
  const auto c = RunConfig::FromJson(R"({
    "seed": 9,
    "generator": {"n_patients": 4, "activities": {"walking": {"median_hr": 101}}},
    "model": {"d_model": 32, "heads": 4, "window": 12},
    "diffusion": {"schedule": "linear", "steps": 100, "samples": 3, "loss": "huber:0.4"},
    "training": {"lr_milestones": [5, 9]},
    "paths": {"data": "d"}
  })");
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.generator.n_patients, 4u);
  for (const auto& p : c.generator.activities) {
    if (p.label == ActivityLabel::kWalking) EXPECT_EQ(p.median_hr, 101.0);
  }
  EXPECT_EQ(c.dataset_options().window, 12u);
  EXPECT_EQ(c.training.schedule, ScheduleKind::kLinear);
  EXPECT_EQ(c.training.forecast_samples, 3u);
  EXPECT_DOUBLE_EQ(c.training.loss.huber_delta, 0.4);
  EXPECT_EQ(c.training.lr_milestones, (std::vector<std::size_t>{5, 9}));
  const auto again = RunConfig::FromJson(c.ToJson());
  EXPECT_EQ(again.ToJson(), c.ToJson());
  EXPECT_EQ(again.Hash(), c.Hash());
}

TEST(RunConfigTest, HashIgnoresPathsButNotSettings) {
  auto a = RunConfig::FromJson("{}");
  auto b = a;
  b.paths.data = "/elsewhere";
  EXPECT_EQ(a.Hash(), b.Hash());
  EXPECT_EQ(a.HashHex().size(), 16u);
  b.training.epochs = 3;
  EXPECT_NE(a.Hash(), b.Hash());
  EXPECT_EQ(a.ToJson(false).find("paths"), std::string::npos);
}

TEST(RunConfigTest, RejectsUnknownKeysAndBadTypes) {
  const char* bad[] = {
      R"({"sed": 1})",
      R"({"model": {"dmodel": 3}})",
      R"({"generator": {"activities": {"dancing": {}}}})",
      R"({"seed": -1})",
      R"({"seed": "1"})",
      R"({"training": {"epochs": 2.5}})",
      R"({"training": {"lr_milestones": [1, "x"]}})",
      R"({"diffusion": {"schedule": "sigmoid"}})",
      R"({"diffusion": {"loss": "l2"}})",
      "{not json",
  };
  for (const char* text : bad) {
    EXPECT_THROW(RunConfig::FromJson(text), ConfigError) << text;
  }
  try {
    RunConfig::FromJson(R"({"model": {"dmodel": 3}})");
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("model.dmodel"), std::string::npos);
  }
}

TEST(RunConfigTest, ValidateChecksRanges) {
  const char* bad[] = {
      R"({"features": {"ema_alpha": 0}})",
      R"({"features": {"std_window": 1}})",
      R"({"preprocess": {"contamination": 0.7}})",
      R"({"preprocess": {"smooth_window": 4}})",
      R"({"model": {"heads": 3}})",
      R"({"split": {"train": 0.5}})",
      R"({"diffusion": {"steps": 0}})",
      R"({"diffusion": {"samples": 0}})",
      R"({"training": {"batch_size": 0}})",
  };
  for (const char* text : bad) {
    EXPECT_THROW(RunConfig::FromJson(text).Validate(), ConfigError) << text;
  }
}

TEST(RunConfigTest, MissingFile) {
  EXPECT_THROW(RunConfig::FromFile("/nonexistent/run.json"), ConfigError);
}

TEST(RunConfigTest, ShippedConfigsAreValid) {
  for (const char* name : {"desk.json", "paper.json"}) {
    const auto c = RunConfig::FromFile(std::string(HRDIFF_SOURCE_DIR) + "/configs/" + name);
    EXPECT_NO_THROW(c.Validate()) << name;
  }
  const auto full = RunConfig::FromFile(std::string(HRDIFF_SOURCE_DIR) + "/configs/paper.json");
  EXPECT_EQ(full.model, ModelConfig{});
  EXPECT_EQ(full.training.epochs, 400u);
  const auto desk = RunConfig::FromFile(std::string(HRDIFF_SOURCE_DIR) + "/configs/desk.json");
  EXPECT_EQ(desk.model.d_model, 32u);
  EXPECT_EQ(desk.model.heads, 4u);
  EXPECT_EQ(desk.training.diffusion_steps, 50u);
  EXPECT_EQ(desk.training.schedule, ScheduleKind::kCosine);
  EXPECT_EQ(desk.training.loss.kind, LossKind::kL1);
}

}  // namespace
}  // namespace hrdiff
