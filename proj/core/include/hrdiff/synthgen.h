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

// Synthetic wearable dataset: per-patient exercise sessions with 1-minute HR
// and intensity streams plus activity segments, written in the same schemas
// as real data.
//
// Each session is one contiguous run: a resting lead-in, one activity
// segment and a recovery tail. Latent HR relaxes toward a set-point
// (first-order dynamics) plus a decaying Laplace shock component; the observed
// value adds small Gaussian noise and is clamped to [30, 220] BPM.

#ifndef HRDIFF_SYNTHGEN_H_
#define HRDIFF_SYNTHGEN_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "hrdiff/csv_io.h"
#include "hrdiff/series.h"

namespace hrdiff {

struct ActivityProfile {
  ActivityLabel label = ActivityLabel::kWalking;
  double proportion = 0.0;         // share of segments (normalised on use)
  double mean_duration_min = 0.0;  // > 0
  double median_hr = 0.0;          // set-point, BPM
  double volatility = 0.0;         // std of set-point wander, BPM
};

// Activity statistics of the reference cohort (segment share, mean duration,
// median HR). Volatilities are generator tuning, not cohort statistics.
std::array<ActivityProfile, kNumActivities> DefaultActivityProfiles();

struct GeneratorConfig {
  std::size_t n_patients = 29;
  std::size_t days_per_patient = 120;
  double session_probability = 0.085;  // per patient-day
  std::uint64_t seed = 0;
  std::array<ActivityProfile, kNumActivities> activities =
      DefaultActivityProfiles();
  // Every activity gets at least this many segments over the dataset, as far
  // as the drawn sessions allow (sessions are relabelled, never added).
  std::size_t min_segments_per_activity = 0;

  double resting_hr_min = 60.0;
  double resting_hr_max = 75.0;
  double patient_offset_bpm = 3.0;  // uniform +/- on activity set-points
  double circadian_amplitude = 4.0;
  double relax_minutes = 5.0;
  double process_noise_bpm = 2.0;
  double observation_noise_bpm = 1.0;
  // Heavy-tailed shocks; they decay on their own time constant, separately
  // from the set-point relaxation.
  double shock_rate = 1.0;       // per minute
  double shock_scale_bpm = 1.8;  // Laplace scale
  double shock_decay_minutes = 8.0;
  // Set-point shifts inside a segment (intensity changes).
  double shift_rate = 0.06;  // per minute
  std::size_t lead_in_min = 35;
  std::size_t lead_in_max = 60;
  std::size_t recovery_min = 20;
  std::size_t recovery_max = 40;
  int start_year = 2024;
};

// Throws std::invalid_argument on inconsistent settings.
void ValidateGeneratorConfig(const GeneratorConfig& config);

// One PatientData per patient (ids "patient_000", ...). Deterministic in the
// config; each patient uses an RNG stream derived from (seed, patient index).
std::vector<PatientData> Generate(const GeneratorConfig& config);

enum class Partition : std::uint8_t { kTrain = 0, kValidation, kTest };

struct SplitRatios {
  double train = 0.65;
  double validation = 0.15;
  double test = 0.20;
};

// Assigns whole segments to partitions. Counts are round(ratio * n) for train
// and validation with the remainder in test; a split with a non-zero ratio
// always receives at least one segment. Throws std::invalid_argument when the
// ratios do not sum to 1 or there are fewer segments than non-empty splits.
std::vector<Partition> SplitSegments(std::size_t n_segments,
                                     const SplitRatios& ratios,
                                     std::uint64_t seed);

}  // namespace hrdiff

#endif  // HRDIFF_SYNTHGEN_H_
