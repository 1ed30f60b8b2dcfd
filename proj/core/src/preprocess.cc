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

#include "hrdiff/preprocess.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace hrdiff {

std::vector<double> MovingAverageSmooth(std::span<const double> series,
                                        std::size_t window) {
  if (window == 0 || window % 2 == 0) {
    throw std::invalid_argument("smoothing window must be odd and >= 1");
  }
  const std::size_t n = series.size();
  const std::size_t half = window / 2;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n - 1, i + half);
    double sum = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) sum += series[j];
    out[i] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

double Rmse(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("rmse: length mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  }
  if (a.empty()) return 0.0;
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) ss += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(ss / static_cast<double>(a.size()));
}

std::vector<double> InterpolateFlagged(std::span<const double> series,
                                       std::span<const std::size_t> flagged) {
  std::vector<double> out(series.begin(), series.end());
  if (flagged.empty()) return out;
  std::vector<bool> bad(series.size(), false);
  for (std::size_t i : flagged) {
    if (i >= series.size()) throw std::out_of_range("flagged index out of range");
    bad[i] = true;
  }
  const std::size_t n = series.size();
  std::size_t i = 0;
  while (i < n) {
    if (!bad[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && bad[j]) ++j;
    // [i, j) is a flagged gap.
    const bool has_left = i > 0;
    const bool has_right = j < n;
    for (std::size_t k = i; k < j; ++k) {
      if (has_left && has_right) {
        const double w = static_cast<double>(k - (i - 1)) /
                         static_cast<double>(j - (i - 1));
        out[k] = (1.0 - w) * series[i - 1] + w * series[j];
      } else if (has_left) {
        out[k] = series[i - 1];
      } else if (has_right) {
        out[k] = series[j];
      }
    }
    i = j;
  }
  return out;
}

void SuddenChangeStats::Accumulate(const SuddenChangeStats& other) {
  const double total_mag = mean_magnitude * static_cast<double>(events) +
                           other.mean_magnitude * static_cast<double>(other.events);
  points += other.points;
  events += other.events;
  rises += other.rises;
  drops += other.drops;
  mean_magnitude = events > 0 ? total_mag / static_cast<double>(events) : 0.0;
  for (std::size_t b = 0; b < histogram.size(); ++b) histogram[b] += other.histogram[b];
  for (std::size_t a = 0; a < kActivityVocab; ++a) {
    points_per_activity[a] += other.points_per_activity[a];
    events_per_activity[a] += other.events_per_activity[a];
  }
  Finalize();
}

void SuddenChangeStats::Finalize() {
  fraction = points > 0 ? static_cast<double>(events) / static_cast<double>(points)
                        : 0.0;
  rise_fraction =
      events > 0 ? static_cast<double>(rises) / static_cast<double>(events) : 0.0;
  drop_fraction =
      events > 0 ? static_cast<double>(drops) / static_cast<double>(events) : 0.0;
}

namespace {

template <typename HrAt, typename LabelAt>
SuddenChangeStats ScanRun(std::size_t n, HrAt hr_at, LabelAt label_at,
                          const SuddenChangeOptions& options) {
  SuddenChangeStats stats;
  double total_mag = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    ++stats.points;
    const std::size_t a = ActivityIndex(label_at(t));
    ++stats.points_per_activity[a];
    double best = 0.0;
    double signed_best = 0.0;
    for (std::size_t k : options.horizons) {
      if (t + k >= n) continue;
      const double d = hr_at(t + k) - hr_at(t);
      if (std::abs(d) > best) {
        best = std::abs(d);
        signed_best = d;
      }
    }
    if (best > options.threshold) {
      ++stats.events;
      ++stats.events_per_activity[a];
      total_mag += best;
      if (signed_best > 0) {
        ++stats.rises;
      } else {
        ++stats.drops;
      }
      std::size_t bin = 0;
      while (bin + 1 < SuddenChangeStats::kBinEdges.size() &&
             best >= SuddenChangeStats::kBinEdges[bin + 1]) {
        ++bin;
      }
      ++stats.histogram[bin];
    }
  }
  stats.mean_magnitude =
      stats.events > 0 ? total_mag / static_cast<double>(stats.events) : 0.0;
  stats.Finalize();
  return stats;
}

}  // namespace

SuddenChangeStats ComputeSuddenChanges(std::span<const AnnotatedSample> run,
                                       const SuddenChangeOptions& options) {
  return ScanRun(
      run.size(), [&](std::size_t i) { return run[i].hr; },
      [&](std::size_t i) { return run[i].activity; }, options);
}

SuddenChangeStats ComputeSuddenChanges(std::span<const double> hr,
                                       const SuddenChangeOptions& options) {
  return ScanRun(
      hr.size(), [&](std::size_t i) { return hr[i]; },
      [](std::size_t) { return ActivityLabel::kNone; }, options);
}

PointSet OutlierFeatures(std::span<const AnnotatedSample> samples) {
  PointSet points;
  points.dims = 1 + kNumIntensityCategories;
  points.values.reserve(samples.size() * points.dims);
  for (const auto& s : samples) {
    points.values.push_back(s.hr);
    const auto dominant = static_cast<std::size_t>(DominantIntensity(s.intensity));
    for (std::size_t c = 0; c < kNumIntensityCategories; ++c) {
      points.values.push_back(c == dominant ? 1.0 : 0.0);
    }
  }
  return points;
}

PreprocessedPatient PreprocessPatient(const PatientData& patient,
                                      const PreprocessOptions& options,
                                      std::uint64_t seed) {
  PreprocessedPatient result;
  result.cleaned.id = patient.id;
  result.cleaned.segments = patient.segments;

  const auto fused = FuseSeries(patient.hr, patient.intensity);
  const auto labelled = LabelSeries(fused, patient.segments);
  const auto runs = SplitContiguousRuns(labelled);

  // Smooth each run independently so no window straddles a gap.
  std::vector<AnnotatedSample> smoothed;
  smoothed.reserve(labelled.size());
  double ss = 0.0;
  for (const auto& run : runs) {
    std::vector<double> hr(run.size());
    for (std::size_t i = 0; i < run.size(); ++i) hr[i] = run[i].hr;
    const auto sm = MovingAverageSmooth(hr, options.smooth_window);
    for (std::size_t i = 0; i < run.size(); ++i) {
      ss += (hr[i] - sm[i]) * (hr[i] - sm[i]);
      auto s = run[i];
      s.hr = sm[i];
      smoothed.push_back(s);
    }
    auto stats = ComputeSuddenChanges(run, options.sudden);
    result.report.sudden_changes.Accumulate(stats);
  }
  result.report.points = smoothed.size();
  result.report.rmse_raw_vs_smoothed =
      smoothed.empty() ? 0.0 : std::sqrt(ss / static_cast<double>(smoothed.size()));

  std::vector<std::size_t> flagged;
  if (smoothed.size() >= 2) {
    const auto points = OutlierFeatures(smoothed);
    IsolationForestOptions forest_options;
    forest_options.num_trees = options.trees;
    forest_options.subsample = options.subsample;
    forest_options.seed = seed;
    const auto forest = IsolationForest::Fit(points, forest_options);
    flagged = FlagOutliers(forest.Score(points), options.contamination).flagged;
  }
  result.report.n_outliers = flagged.size();

  // Interpolate within each run using the run-local flagged indices.
  std::size_t offset = 0;
  std::size_t f = 0;
  for (const auto& run : runs) {
    std::vector<std::size_t> local;
    while (f < flagged.size() && flagged[f] < offset + run.size()) {
      local.push_back(flagged[f] - offset);
      ++f;
    }
    std::vector<double> hr(run.size());
    for (std::size_t i = 0; i < run.size(); ++i) hr[i] = smoothed[offset + i].hr;
    const auto fixed = InterpolateFlagged(hr, local);
    for (std::size_t i = 0; i < run.size(); ++i) {
      const auto& s = smoothed[offset + i];
      result.cleaned.hr.push_back({s.t, fixed[i]});
      result.cleaned.intensity.push_back({s.t, s.intensity});
    }
    offset += run.size();
  }
  return result;
}

PreprocessReport MergeReports(std::span<const PreprocessReport> reports) {
  PreprocessReport merged;
  double ss = 0.0;
  for (const auto& r : reports) {
    ss += r.rmse_raw_vs_smoothed * r.rmse_raw_vs_smoothed *
          static_cast<double>(r.points);
    merged.points += r.points;
    merged.n_outliers += r.n_outliers;
    merged.sudden_changes.Accumulate(r.sudden_changes);
  }
  merged.rmse_raw_vs_smoothed =
      merged.points > 0 ? std::sqrt(ss / static_cast<double>(merged.points)) : 0.0;
  return merged;
}

std::string ReportToJson(const PreprocessReport& report) {
  using nlohmann::ordered_json;
  const auto& sc = report.sudden_changes;
  ordered_json per_activity = ordered_json::object();
  for (std::size_t a = 0; a < kActivityVocab; ++a) {
    const auto label = static_cast<ActivityLabel>(a);
    const double rate = sc.points_per_activity[a] > 0
                            ? static_cast<double>(sc.events_per_activity[a]) /
                                  static_cast<double>(sc.points_per_activity[a])
                            : 0.0;
    per_activity[std::string(ActivityName(label))] = {
        {"points", sc.points_per_activity[a]},
        {"events", sc.events_per_activity[a]},
        {"event_rate", rate}};
  }
  ordered_json histogram = ordered_json::array();
  for (std::size_t b = 0; b < sc.histogram.size(); ++b) {
    histogram.push_back({{"min_bpm", SuddenChangeStats::kBinEdges[b]},
                         {"count", sc.histogram[b]}});
  }
  ordered_json j = {
      {"rmse_raw_vs_smoothed", report.rmse_raw_vs_smoothed},
      {"points", report.points},
      {"n_outliers", report.n_outliers},
      {"sudden_change_stats",
       {{"events", sc.events},
        {"fraction", sc.fraction},
        {"mean_magnitude_bpm", sc.mean_magnitude},
        {"rise_fraction", sc.rise_fraction},
        {"drop_fraction", sc.drop_fraction},
        {"magnitude_histogram", histogram},
        {"per_activity", per_activity}}}};
  return j.dump(2);
}

}  // namespace hrdiff
