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

#include "hrdiff/dataset.h"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "oracles.h"

namespace hrdiff {
namespace {

std::vector<PatientData> SmallCohort() {
  GeneratorConfig g;
  g.n_patients = 3;
  g.days_per_patient = 60;
  g.min_segments_per_activity = 1;
  g.seed = 21;
  return Generate(g);
}

TEST(DatasetTest, WindowsAreWellFormedAndSplitBySegment) {
  const auto patients = SmallCohort();
  const auto ds = BuildDataset(patients, {}, 4);
  ASSERT_FALSE(ds.windows.empty());
  std::map<std::size_t, Partition> part_of_segment;
  std::set<std::size_t> ids;
  for (const auto& w : ds.windows) {
    EXPECT_EQ(w.window.source.size(), 10u);
    EXPECT_EQ(w.window.target.size(), 10u);
    EXPECT_NE(w.window.anchor_activity, ActivityLabel::kNone);
    EXPECT_LT(w.segment_id, ds.segments);
    const auto [it, fresh] = part_of_segment.emplace(w.segment_id, w.partition);
    if (!fresh) EXPECT_EQ(it->second, w.partition);
    ids.insert(w.segment_id);
    // Source immediately precedes the target.
    EXPECT_EQ(w.window.target.front().t - w.window.source.back().t, 1);
  }
  EXPECT_EQ(ids.size(), ds.segments);
  std::map<Partition, std::size_t> segs;
  for (const auto& [id, p] : part_of_segment) ++segs[p];
  EXPECT_EQ(segs[Partition::kTrain], static_cast<std::size_t>(std::lround(0.65 * ds.segments)));
  EXPECT_GE(segs[Partition::kValidation], 1u);
  EXPECT_GE(segs[Partition::kTest], 1u);
  const auto again = BuildDataset(patients, {}, 4);
  ASSERT_EQ(again.windows.size(), ds.windows.size());
  for (std::size_t i = 0; i < ds.windows.size(); ++i) {
    EXPECT_EQ(again.windows[i].partition, ds.windows[i].partition);
  }
}

TEST(NormalizerTest, FitsOnTrainingWindowsOnly) {
  const auto ds = BuildDataset(SmallCohort(), {}, 4);
  const auto train = ds.Partitioned(Partition::kTrain);
  const auto n = Normalizer::Fit(train);
  std::vector<double> hr, ema;
  for (const auto* w : train) {
    for (const auto& f : w->window.source) {
      hr.push_back(f.hr);
      ema.push_back(f.ema);
    }
    for (const auto& t : w->window.target) hr.push_back(t.hr);
  }
  const auto mh = oracle::SampleMoments(hr);
  const auto me = oracle::SampleMoments(ema);
  EXPECT_NEAR(n.mean[0], mh.mean, 1e-9);
  EXPECT_NEAR(n.stddev[0], std::sqrt(mh.variance), 1e-9);
  EXPECT_NEAR(n.mean[3], me.mean, 1e-9);
  EXPECT_NEAR(n.DenormalizeHr(n.NormalizeHr(123.4)), 123.4, 1e-12);
  const auto round = Normalizer::FromJson(n.ToJson());
  EXPECT_EQ(round.mean, n.mean);
  EXPECT_EQ(round.stddev, n.stddev);
  EXPECT_EQ(round.intensity_hi, n.intensity_hi);
  EXPECT_THROW(Normalizer::Fit({}), std::invalid_argument);
}

TEST(NormalizerTest, EncodesWindows) {
  const auto ds = BuildDataset(SmallCohort(), {}, 4);
  const auto train = ds.Partitioned(Partition::kTrain);
  const auto n = Normalizer::Fit(train);
  const auto& w = train.front()->window;
  const auto in = EncodeWindow(w, n);
  for (std::size_t t = 0; t < 10; ++t) {
    EXPECT_NEAR(in.channels[0][t], (w.source[t].hr - n.mean[0]) / n.stddev[0], 1e-15);
    EXPECT_NEAR(in.channels[1][t], (w.source[t].gradient - n.mean[1]) / n.stddev[1], 1e-15);
    EXPECT_LT(in.source_intensity[t], kNumIntensityCategories);
    EXPECT_EQ(in.target_activity[t], ActivityIndex(w.target[t].activity));
  }
  EXPECT_EQ(in.anchor, w.anchor_activity);
  const auto target = EncodeTarget(w, n);
  EXPECT_NEAR(target[3], n.NormalizeHr(w.target[3].hr), 1e-15);
  auto broken = w;
  broken.target.pop_back();
  EXPECT_THROW(EncodeWindow(broken, n), std::invalid_argument);
}

}  // namespace
}  // namespace hrdiff
