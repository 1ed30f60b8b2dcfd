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

#ifndef HRDIFF_FEATURES_H_
#define HRDIFF_FEATURES_H_

#include <algorithm>
#include <array>
#include <cstddef>
#include <deque>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "hrdiff/series.h"

namespace hrdiff {

struct FeatureParams {
  // EMA smoothing factor; 2 / (window + 1) with a window of 5.
  double ema_alpha = 1.0 / 3.0;
  std::size_t std_window = 5;
  std::size_t trend_lag = 5;      // N
  std::size_t trend_window = 15;  // M

  // Samples needed before every derived feature is defined.
  std::size_t warmup() const {
    return std::max(std_window, trend_lag + trend_window);
  }
};

// Point evaluations over a contiguous HR run. `t` indexes `hr`. Calling them
// without the documented history throws std::out_of_range.
double HrGradient(std::span<const double> hr, std::size_t t);
// Population standard deviation (divides by the window length).
double RollingStd(std::span<const double> hr, std::size_t t,
                  std::size_t window = 5);
// e(0) = hr(0); e(t) = alpha * hr(t) + (1 - alpha) * e(t - 1).
double Ema(std::span<const double> hr, std::size_t t, double alpha = 1.0 / 3.0);
// Mean over the last `window` values of p(t) = hr(t) - hr(t - lag).
double TrendSmoothed(std::span<const double> hr, std::size_t t,
                     std::size_t lag = 5, std::size_t window = 15);

struct DerivedFeatures {
  double gradient = 0.0;
  double rolling_std = 0.0;
  double ema = 0.0;
  double trend = 0.0;
};

// Incremental computation of the derived HR features over one contiguous
// run. Push() returns a value once the warm-up history is available.
class FeatureStream {
 public:
  explicit FeatureStream(const FeatureParams& params = {});

  std::optional<DerivedFeatures> Push(double hr);
  std::size_t count() const { return count_; }

 private:
  FeatureParams params_;
  std::size_t count_ = 0;
  double ema_ = 0.0;
  // Last max(std_window, trend_lag + 1) HR values.
  std::deque<double> hr_tail_;
  // Last trend_window values of p(t).
  std::deque<double> trend_tail_;
};

inline constexpr std::size_t kFeaturePayloadDim = 2 + kNumIntensityCategories + 9;

struct FeatureVector {
  Timestamp t;
  double hr = 0.0;
  IntensityVector intensity{};
  ActivityLabel activity = ActivityLabel::kNone;
  TemporalFeatures temporal;
  double gradient = 0.0;
  double rolling_std = 0.0;
  double ema = 0.0;
  double trend = 0.0;

  // The five numeric channels fed to the token embedding, in segment order:
  // HR, gradient, rolling std, EMA, trend.
  std::array<double, 5> channels() const {
    return {hr, gradient, rolling_std, ema, trend};
  }
};

struct FeatureBuildResult {
  std::vector<FeatureVector> features;
  // Runs dropped because they were shorter than the warm-up.
  std::size_t short_runs = 0;
};

// One vector per sample after the warm-up; warm-up samples are dropped.
// `run` must be a contiguous 1-minute run.
FeatureBuildResult BuildFeatureVectors(std::span<const AnnotatedSample> run,
                                       const FeatureParams& params = {});

struct TargetPoint {
  Timestamp t;
  double hr = 0.0;
  ActivityLabel activity = ActivityLabel::kNone;
};

struct FeatureWindow {
  std::vector<FeatureVector> source;  // t - L ... t - 1
  std::vector<TargetPoint> target;    // t ... t + L - 1
  ActivityLabel anchor_activity = ActivityLabel::kNone;
  // Start of the anchoring segment and the window's index in its chain.
  Timestamp anchor_start;
  std::size_t chain_index = 0;
};

struct WindowBuildResult {
  std::vector<FeatureWindow> windows;
  // For each window, the index of its anchoring segment in the input span.
  std::vector<std::size_t> segment_of_window;
  // Segments whose start lacked L samples of history or L of future.
  std::size_t skipped_segments = 0;
};

// Builds segment-anchored windows over one contiguous feature run. For a
// segment starting at index i the first window takes source [i - L, i) and
// target [i, i + L). Each further window reuses the previous target span as
// its source, and is only emitted while at least 2L samples remain after the
// previous target. Segments that do not start inside the run are ignored.
WindowBuildResult MakeWindows(std::span<const FeatureVector> features,
                              std::span<const ActivitySegment> segments,
                              std::size_t window_length);

// Debug dump: one row per timestamp with the 15 payload columns.
inline constexpr std::string_view kFeatureDumpHeader =
    "hr,sed,light,fair,very,activity,month,dom,dow,hour,minute,grad,rstd5,ema5,"
    "trend5_15";
void WriteFeatureDump(std::ostream& out, std::span<const FeatureVector> features);

}  // namespace hrdiff

#endif  // HRDIFF_FEATURES_H_
