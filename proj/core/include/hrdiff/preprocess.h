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

// Data-quality pipeline: centred moving-average smoothing, isolation-forest
// outlier detection with interpolation of flagged points, and analysis of
// sudden HR changes.

#ifndef HRDIFF_PREPROCESS_H_
#define HRDIFF_PREPROCESS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hrdiff/csv_io.h"
#include "hrdiff/isolation_forest.h"
#include "hrdiff/series.h"

namespace hrdiff {

// Centred mean over `window` (odd) points; near the edges the window is
// truncated to the available samples. Output length equals input length.
std::vector<double> MovingAverageSmooth(std::span<const double> series,
                                        std::size_t window = 5);

double Rmse(std::span<const double> a, std::span<const double> b);

// Replaces flagged entries by linear interpolation between the nearest
// unflagged neighbours (nearest value at the edges). `flagged` ascending.
std::vector<double> InterpolateFlagged(std::span<const double> series,
                                       std::span<const std::size_t> flagged);

struct SuddenChangeOptions {
  double threshold = 10.0;  // strict: |difference| > threshold
  std::vector<std::size_t> horizons = {1, 2, 3};
};

struct SuddenChangeStats {
  std::size_t points = 0;
  std::size_t events = 0;
  double fraction = 0.0;
  double mean_magnitude = 0.0;
  std::size_t rises = 0;
  std::size_t drops = 0;
  double rise_fraction = 0.0;
  double drop_fraction = 0.0;
  // Magnitude histogram: edges 10,15,20,25,30 with an open last bin.
  static constexpr std::array<double, 5> kBinEdges = {10, 15, 20, 25, 30};
  std::array<std::size_t, 5> histogram{};
  // Indexed by ActivityIndex (kNone included).
  std::array<std::size_t, kActivityVocab> points_per_activity{};
  std::array<std::size_t, kActivityVocab> events_per_activity{};

  void Accumulate(const SuddenChangeStats& other);
  void Finalize();
};

// Scans one contiguous run. Point t is an event iff max over horizons k of
// |h(t+k) - h(t)| exceeds the threshold; horizons past the run end are
// ignored. Direction follows the sign of the difference achieving the max
// (first horizon wins ties).
SuddenChangeStats ComputeSuddenChanges(std::span<const AnnotatedSample> run,
                                       const SuddenChangeOptions& options = {});
SuddenChangeStats ComputeSuddenChanges(std::span<const double> hr,
                                       const SuddenChangeOptions& options = {});

struct PreprocessOptions {
  std::size_t smooth_window = 5;
  double contamination = 0.05;
  std::size_t trees = 100;
  std::size_t subsample = 256;
  SuddenChangeOptions sudden;
};

struct PreprocessReport {
  double rmse_raw_vs_smoothed = 0.0;
  std::size_t points = 0;
  std::size_t n_outliers = 0;
  SuddenChangeStats sudden_changes;
};

struct PreprocessedPatient {
  PatientData cleaned;  // smoothed, outliers interpolated
  PreprocessReport report;
};

// Isolation-forest input per point: HR followed by the one-hot dominant
// intensity category.
PointSet OutlierFeatures(std::span<const AnnotatedSample> samples);

// smooth -> detect -> interpolate, per contiguous run; the forest is fitted
// once per patient. Sudden-change statistics are measured on the raw series.
PreprocessedPatient PreprocessPatient(const PatientData& patient,
                                      const PreprocessOptions& options,
                                      std::uint64_t seed);

// Merges per-patient reports (RMSE is pooled over points).
PreprocessReport MergeReports(std::span<const PreprocessReport> reports);

std::string ReportToJson(const PreprocessReport& report);

}  // namespace hrdiff

#endif  // HRDIFF_PREPROCESS_H_
