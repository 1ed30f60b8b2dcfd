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

#include "hrdiff/features.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hrdiff/csv_io.h"

namespace hrdiff {
namespace {

void RequireHistory(std::span<const double> hr, std::size_t t,
                    std::size_t history, const char* what) {
  if (t >= hr.size() || t < history) {
    throw std::out_of_range(std::string(what) + ": index " + std::to_string(t) +
                            " needs " + std::to_string(history) +
                            " samples of history");
  }
}

double PopulationStd(const std::deque<double>& tail, std::size_t window) {
  const std::size_t n = tail.size();
  double mean = 0.0;
  for (std::size_t j = n - window; j < n; ++j) mean += tail[j];
  mean /= static_cast<double>(window);
  double ss = 0.0;
  for (std::size_t j = n - window; j < n; ++j) {
    const double d = tail[j] - mean;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(window));
}

}  // namespace

double HrGradient(std::span<const double> hr, std::size_t t) {
  RequireHistory(hr, t, 1, "gradient");
  return hr[t] - hr[t - 1];  // cadence is one minute
}

double RollingStd(std::span<const double> hr, std::size_t t,
                  std::size_t window) {
  RequireHistory(hr, t, window - 1, "rolling std");
  double mean = 0.0;
  for (std::size_t j = 0; j < window; ++j) mean += hr[t - j];
  mean /= static_cast<double>(window);
  double ss = 0.0;
  for (std::size_t j = 0; j < window; ++j) {
    ss += (hr[t - j] - mean) * (hr[t - j] - mean);
  }
  return std::sqrt(ss / static_cast<double>(window));
}

double Ema(std::span<const double> hr, std::size_t t, double alpha) {
  RequireHistory(hr, t, 0, "ema");
  double e = hr[0];
  for (std::size_t j = 1; j <= t; ++j) e = alpha * hr[j] + (1.0 - alpha) * e;
  return e;
}

double TrendSmoothed(std::span<const double> hr, std::size_t t, std::size_t lag,
                     std::size_t window) {
  RequireHistory(hr, t, lag + window - 1, "trend");
  double sum = 0.0;
  for (std::size_t j = 0; j < window; ++j) sum += hr[t - j] - hr[t - j - lag];
  return sum / static_cast<double>(window);
}

FeatureStream::FeatureStream(const FeatureParams& params) : params_(params) {
  if (params_.std_window == 0 || params_.trend_window == 0 ||
      params_.trend_lag == 0) {
    throw std::invalid_argument("feature windows must be positive");
  }
}

std::optional<DerivedFeatures> FeatureStream::Push(double hr) {
  ++count_;
  ema_ = count_ == 1 ? hr
                     : params_.ema_alpha * hr + (1.0 - params_.ema_alpha) * ema_;

  hr_tail_.push_back(hr);
  const std::size_t keep = std::max(params_.std_window, params_.trend_lag + 1);
  while (hr_tail_.size() > keep) hr_tail_.pop_front();

  if (count_ > params_.trend_lag) {
    trend_tail_.push_back(hr - hr_tail_[hr_tail_.size() - 1 - params_.trend_lag]);
    while (trend_tail_.size() > params_.trend_window) trend_tail_.pop_front();
  }

  if (count_ < params_.warmup() || count_ < 2) return std::nullopt;

  DerivedFeatures out;
  out.gradient = hr - hr_tail_[hr_tail_.size() - 2];
  out.rolling_std = PopulationStd(hr_tail_, params_.std_window);
  out.ema = ema_;
  double sum = 0.0;
  for (double p : trend_tail_) sum += p;
  out.trend = sum / static_cast<double>(params_.trend_window);
  return out;
}

FeatureBuildResult BuildFeatureVectors(std::span<const AnnotatedSample> run,
                                       const FeatureParams& params) {
  FeatureBuildResult result;
  if (run.size() < params.warmup()) {
    if (!run.empty()) result.short_runs = 1;
    return result;
  }
  FeatureStream stream(params);
  result.features.reserve(run.size() - params.warmup() + 1);
  for (const auto& s : run) {
    const auto derived = stream.Push(s.hr);
    if (!derived) continue;
    FeatureVector f;
    f.t = s.t;
    f.hr = s.hr;
    f.intensity = s.intensity;
    f.activity = s.activity;
    f.temporal = ComputeTemporalFeatures(s.t);
    f.gradient = derived->gradient;
    f.rolling_std = derived->rolling_std;
    f.ema = derived->ema;
    f.trend = derived->trend;
    result.features.push_back(f);
  }
  return result;
}

WindowBuildResult MakeWindows(std::span<const FeatureVector> features,
                              std::span<const ActivitySegment> segments,
                              std::size_t window_length) {
  if (window_length == 0) throw std::invalid_argument("window length must be >= 1");
  WindowBuildResult result;
  if (features.empty()) return result;
  const std::size_t n = features.size();
  const std::size_t L = window_length;
  const Timestamp first = features.front().t;
  const Timestamp last = features.back().t;

  auto emit = [&](std::size_t src_begin, const ActivitySegment& seg,
                  std::size_t seg_index, std::size_t chain) {
    FeatureWindow w;
    w.source.assign(features.begin() + src_begin,
                    features.begin() + src_begin + L);
    w.target.reserve(L);
    for (std::size_t j = src_begin + L; j < src_begin + 2 * L; ++j) {
      w.target.push_back({features[j].t, features[j].hr, features[j].activity});
    }
    w.anchor_activity = seg.label;
    w.anchor_start = seg.start;
    w.chain_index = chain;
    result.windows.push_back(std::move(w));
    result.segment_of_window.push_back(seg_index);
  };

  for (std::size_t k = 0; k < segments.size(); ++k) {
    const auto& seg = segments[k];
    if (seg.start < first || seg.start > last) continue;
    const auto i = static_cast<std::size_t>(seg.start - first);
    if (i < L || i + L > n) {
      ++result.skipped_segments;
      continue;
    }
    std::size_t begin = i - L;
    std::size_t chain = 0;
    emit(begin, seg, k, chain);
    while (n - (begin + 2 * L) >= 2 * L) {
      begin += L;
      emit(begin, seg, k, ++chain);
    }
  }
  return result;
}

void WriteFeatureDump(std::ostream& out, std::span<const FeatureVector> features) {
  out << kFeatureDumpHeader << '\n';
  for (const auto& f : features) {
    out << FormatDouble(f.hr);
    for (double v : f.intensity) out << ',' << FormatDouble(v);
    out << ',' << ActivityName(f.activity) << ',' << f.temporal.month << ','
        << f.temporal.day_of_month << ',' << f.temporal.day_of_week << ','
        << f.temporal.hour << ',' << f.temporal.minute << ','
        << FormatDouble(f.gradient) << ',' << FormatDouble(f.rolling_std) << ','
        << FormatDouble(f.ema) << ',' << FormatDouble(f.trend) << '\n';
  }
}

}  // namespace hrdiff
