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

#include "hrdiff/metrics.h"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "hrdiff/rng.h"

namespace hrdiff {
namespace {

TEST(MetricsTest, ConstantTruthHasNoR2) {
  const std::vector<double> y = {100, 100}, p = {110, 90};
  const auto m = ComputeMetrics(y, p);
  EXPECT_DOUBLE_EQ(m.mae, 10.0);
  EXPECT_DOUBLE_EQ(m.rmse, 10.0);
  EXPECT_DOUBLE_EQ(m.mape, 10.0);
  EXPECT_FALSE(m.r2.has_value());
  EXPECT_FALSE(m.r2_note.empty());
}

TEST(MetricsTest, PredictingTheMeanGivesZeroR2) {
  const std::vector<double> y = {90, 110}, p = {100, 100};
  const auto m = ComputeMetrics(y, p);
  ASSERT_TRUE(m.r2.has_value());
  EXPECT_DOUBLE_EQ(*m.r2, 0.0);
  EXPECT_NEAR(m.mape, 100.0 * (10.0 / 90 + 10.0 / 110) / 2, 1e-12);
}

TEST(MetricsTest, HandComputedValues) {
  const std::vector<double> y = {60, 80, 100}, p = {62, 77, 100};
  const auto m = ComputeMetrics(y, p);
  EXPECT_EQ(m.count, 3u);
  EXPECT_DOUBLE_EQ(m.mae, 5.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.rmse, std::sqrt(13.0 / 3.0));
  EXPECT_DOUBLE_EQ(*m.r2, 1.0 - 13.0 / 800.0);
  EXPECT_EQ(*ComputeMetrics(y, y).r2, 1.0);
}

TEST(MetricsTest, Errors) {
  const std::vector<double> a = {1, 2}, b = {1};
  EXPECT_THROW(ComputeMetrics(a, b), std::invalid_argument);
  EXPECT_THROW(ComputeMetrics(std::vector<double>{}, std::vector<double>{}),
               std::invalid_argument);
  EXPECT_THROW(ComputeMetrics(std::vector<double>{0, 1}, a), std::domain_error);
}

TEST(MetricsTest, PropertiesOnRandomData) {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> y, p;
    std::vector<std::vector<double>> gy(3), gp(3);
    const std::size_t n = 5 + rng.Index(50);
    for (std::size_t i = 0; i < n; ++i) {
      y.push_back(60 + 40 * rng.Uniform());
      p.push_back(y.back() + 10 * rng.Normal());
      const std::size_t g = rng.Index(3);
      gy[g].push_back(y.back());
      gp[g].push_back(p.back());
    }
    const auto all = ComputeMetrics(y, p);
    EXPECT_LE(all.mae, all.rmse + 1e-12);
    EXPECT_LE(*all.r2, 1.0);
    double weighted = 0.0;
    std::size_t count = 0;
    for (std::size_t g = 0; g < 3; ++g) {
      if (gy[g].empty()) continue;
      const auto m = ComputeMetrics(gy[g], gp[g]);
      weighted += m.mae * static_cast<double>(m.count);
      count += m.count;
    }
    EXPECT_EQ(count, n);
    EXPECT_NEAR(weighted / static_cast<double>(count), all.mae, 1e-9);
  }
}

TEST(MetricsTest, ReferenceFigures) {
  const ReferenceMetrics r;
  EXPECT_EQ(r.mae, 2.19);
  EXPECT_EQ(r.mape, 2.3);
  EXPECT_EQ(r.rmse, 3.44);
  EXPECT_EQ(r.r2, 0.97);
}

}  // namespace
}  // namespace hrdiff
