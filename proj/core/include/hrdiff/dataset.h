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

// From patient records to model-ready windows: feature construction,
// segment-level train/validation/test split, normalisation fitted on the
// training split, and encoding into ModelInput.

#ifndef HRDIFF_DATASET_H_
#define HRDIFF_DATASET_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hrdiff/csv_io.h"
#include "hrdiff/features.h"
#include "hrdiff/hr_transformer.h"
#include "hrdiff/series.h"
#include "hrdiff/synthgen.h"

namespace hrdiff {

struct DatasetOptions {
  FeatureParams features;
  std::size_t window = 10;
  SplitRatios ratios;
};

struct WindowRecord {
  FeatureWindow window;
  std::string patient_id;
  std::size_t segment_id = 0;  // dataset-wide id of the anchoring segment
  Partition partition = Partition::kTrain;
};

struct Dataset {
  std::vector<WindowRecord> windows;
  std::size_t segments = 0;          // segments that produced windows
  std::size_t skipped_segments = 0;  // lacked history or future
  std::size_t short_runs = 0;        // runs shorter than the feature warm-up

  std::vector<const WindowRecord*> Partitioned(Partition p) const;
};

// Windows keep patient order, then run order, then segment start. The split
// assigns whole segments. Throws std::invalid_argument if there are fewer
// segments than non-empty splits.
Dataset BuildDataset(std::span<const PatientData> patients, const DatasetOptions& options,
                     std::uint64_t seed);

// Channel statistics and intensity scaling fitted on training windows.
struct Normalizer {
  // Mean and std per channel: HR, gradient, rolling std, EMA, trend.
  std::array<double, 5> mean{};
  std::array<double, 5> stddev{1, 1, 1, 1, 1};
  IntensityVector intensity_lo{0, 0, 0, 0};
  IntensityVector intensity_hi{1, 1, 1, 1};

  static Normalizer Fit(std::span<const WindowRecord* const> train);

  double NormalizeHr(double bpm) const { return (bpm - mean[0]) / stddev[0]; }
  double DenormalizeHr(double z) const { return z * stddev[0] + mean[0]; }

  std::string ToJson() const;
  static Normalizer FromJson(const std::string& text);
};

ModelInput EncodeWindow(const FeatureWindow& window, const Normalizer& normalizer);
std::vector<double> EncodeTarget(const FeatureWindow& window, const Normalizer& normalizer);

}  // namespace hrdiff

#endif  // HRDIFF_DATASET_H_
