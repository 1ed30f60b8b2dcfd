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

#include "hrdiff/synthgen.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

namespace hrdiff {
namespace {

GeneratorConfig SmallConfig(std::uint64_t seed) {
  GeneratorConfig c;
  c.n_patients = 3;
  c.days_per_patient = 30;
  c.seed = seed;
  return c;
}

TEST(ActivityTableTest, MatchesCohortStatistics) {
  struct Row {
    ActivityLabel label;
    double share, duration, median;
  };
  const Row rows[] = {
      {ActivityLabel::kWalking, 0.595, 89, 99},
      {ActivityLabel::kRunning, 0.122, 70, 128},
      {ActivityLabel::kAerobicWorkout, 0.10, 86, 112},
      {ActivityLabel::kOutdoorBiking, 0.064, 33, 90},
      {ActivityLabel::kSport, 0.047, 39, 105},
      {ActivityLabel::kSwimming, 0.037, 43, 110},
      {ActivityLabel::kTreadmill, 0.01, 130, 75},
  };
  const auto table = DefaultActivityProfiles();
  for (const auto& row : rows) {
    const auto it = std::find_if(table.begin(), table.end(),
                                 [&](const auto& p) { return p.label == row.label; });
    ASSERT_NE(it, table.end());
    EXPECT_DOUBLE_EQ(it->proportion, row.share);
    EXPECT_DOUBLE_EQ(it->mean_duration_min, row.duration);
    EXPECT_DOUBLE_EQ(it->median_hr, row.median);
  }
}

TEST(GeneratorTest, DeterministicInSeed) {
  const auto a = Generate(SmallConfig(5));
  const auto b = Generate(SmallConfig(5));
  const auto c = Generate(SmallConfig(6));
  ASSERT_EQ(a.size(), 3u);
  ASSERT_EQ(a.size(), b.size());
  bool differs = false;
  for (std::size_t p = 0; p < a.size(); ++p) {
    ASSERT_EQ(a[p].hr.size(), b[p].hr.size());
    for (std::size_t i = 0; i < a[p].hr.size(); ++i) {
      EXPECT_EQ(a[p].hr[i].t, b[p].hr[i].t);
      EXPECT_EQ(a[p].hr[i].bpm, b[p].hr[i].bpm);
    }
    if (a[p].hr.size() != c[p].hr.size() ||
        (!a[p].hr.empty() && a[p].hr.front().bpm != c[p].hr.front().bpm)) {
      differs = true;
    }
  }
  EXPECT_TRUE(differs);
  EXPECT_EQ(a[0].id, "patient_000");
  EXPECT_EQ(a[2].id, "patient_002");
}

TEST(GeneratorTest, StreamsAreWellFormed) {
  auto config = SmallConfig(11);
  config.n_patients = 5;
  for (const auto& p : Generate(config)) {
    ASSERT_EQ(p.hr.size(), p.intensity.size());
    std::set<std::int64_t> minutes;
    for (std::size_t i = 0; i < p.hr.size(); ++i) {
      EXPECT_EQ(p.hr[i].t, p.intensity[i].t);
      if (i > 0) EXPECT_LT(p.hr[i - 1].t, p.hr[i].t);
      EXPECT_GE(p.hr[i].bpm, 30.0);
      EXPECT_LE(p.hr[i].bpm, 220.0);
      for (double v : p.intensity[i].levels) EXPECT_GE(v, 0.0);
      minutes.insert(p.hr[i].t.minutes);
    }
    EXPECT_FALSE(ValidateSegments(p.segments).has_value());
    for (const auto& s : p.segments) {
      EXPECT_NE(s.label, ActivityLabel::kNone);
      EXPECT_GT(s.duration, 0);
      // Every segment has history before and samples through its end.
      EXPECT_TRUE(minutes.count((s.start - 1).minutes));
      EXPECT_TRUE(minutes.count((s.end() - 1).minutes));
    }
  }
}

TEST(GeneratorTest, MinimumSegmentsPerActivity) {
  auto config = SmallConfig(3);
  config.n_patients = 2;
  config.days_per_patient = 120;
  config.min_segments_per_activity = 2;
  std::map<ActivityLabel, int> count;
  for (const auto& p : Generate(config)) {
    for (const auto& s : p.segments) ++count[s.label];
  }
  for (auto a : kAllActivities) EXPECT_GE(count[a], 2) << ActivityName(a);
}

TEST(GeneratorTest, ZeroPatientsIsEmpty) {
  auto config = SmallConfig(1);
  config.n_patients = 0;
  EXPECT_TRUE(Generate(config).empty());
}

TEST(GeneratorTest, ValidationRejectsBadSettings) {
  auto bad = SmallConfig(1);
  bad.activities[0].label = ActivityLabel::kNone;
  EXPECT_THROW(ValidateGeneratorConfig(bad), std::invalid_argument);
  bad = SmallConfig(1);
  bad.activities[1].label = bad.activities[0].label;
  EXPECT_THROW(ValidateGeneratorConfig(bad), std::invalid_argument);
  bad = SmallConfig(1);
  for (auto& p : bad.activities) p.proportion = 0.0;
  EXPECT_THROW(ValidateGeneratorConfig(bad), std::invalid_argument);
  bad = SmallConfig(1);
  bad.resting_hr_min = 90;
  EXPECT_THROW(ValidateGeneratorConfig(bad), std::invalid_argument);
  bad = SmallConfig(1);
  bad.shock_rate = 1.5;
  EXPECT_THROW(ValidateGeneratorConfig(bad), std::invalid_argument);
  bad = SmallConfig(1);
  bad.activities[2].mean_duration_min = 0.0;
  EXPECT_THROW(Generate(bad), std::invalid_argument);
}

TEST(SplitSegmentsTest, CountsFollowRatios) {
  const auto parts = SplitSegments(100, {}, 9);
  std::map<Partition, int> n;
  for (auto p : parts) ++n[p];
  EXPECT_EQ(n[Partition::kTrain], 65);
  EXPECT_EQ(n[Partition::kValidation], 15);
  EXPECT_EQ(n[Partition::kTest], 20);
  EXPECT_EQ(SplitSegments(100, {}, 9), parts);
  EXPECT_NE(SplitSegments(100, {}, 10), parts);
}

TEST(SplitSegmentsTest, EveryNonEmptySplitGetsASegment) {
  for (std::size_t n = 3; n < 12; ++n) {
    std::map<Partition, int> count;
    for (auto p : SplitSegments(n, {}, n)) ++count[p];
    EXPECT_GE(count[Partition::kTrain], 1);
    EXPECT_GE(count[Partition::kValidation], 1);
    EXPECT_GE(count[Partition::kTest], 1);
  }
  std::map<Partition, int> count;
  for (auto p : SplitSegments(10, {0.8, 0.0, 0.2}, 1)) ++count[p];
  EXPECT_EQ(count[Partition::kValidation], 0);
  EXPECT_EQ(count[Partition::kTrain], 8);
}

TEST(SplitSegmentsTest, RejectsBadInput) {
  EXPECT_THROW(SplitSegments(2, {}, 1), std::invalid_argument);
  EXPECT_THROW(SplitSegments(10, {0.5, 0.5, 0.5}, 1), std::invalid_argument);
  EXPECT_THROW(SplitSegments(10, {1.2, -0.2, 0.0}, 1), std::invalid_argument);
}

}  // namespace
}  // namespace hrdiff
