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

// Domain types for per-patient heart-rate streams: 1-minute HR samples,
// Fitbit-style intensity levels, labelled activity segments and the fused,
// activity-annotated series built from them.

#ifndef HRDIFF_SERIES_H_
#define HRDIFF_SERIES_H_

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hrdiff {

// Minutes since 1970-01-01T00:00 UTC (proleptic Gregorian).
struct Timestamp {
  std::int64_t minutes = 0;

  constexpr auto operator<=>(const Timestamp&) const = default;
};

constexpr Timestamp operator+(Timestamp t, std::int64_t m) {
  return Timestamp{t.minutes + m};
}
constexpr Timestamp operator-(Timestamp t, std::int64_t m) {
  return Timestamp{t.minutes - m};
}
constexpr std::int64_t operator-(Timestamp a, Timestamp b) {
  return a.minutes - b.minutes;
}

enum class IntensityCategory : std::uint8_t {
  kSedentary = 0,
  kLightlyActive,
  kFairlyActive,
  kVeryActive,
};
inline constexpr std::size_t kNumIntensityCategories = 4;

// The seven tracked activities plus `kNone` for unlabelled minutes. kNone is
// never routed to a specialised encoder.
enum class ActivityLabel : std::uint8_t {
  kRunning = 0,
  kWalking,
  kSwimming,
  kAerobicWorkout,
  kOutdoorBiking,
  kSport,
  kTreadmill,
  kNone,
};
inline constexpr std::size_t kNumActivities = 7;
// Vocabulary size of per-timestep activity ids (activities + none).
inline constexpr std::size_t kActivityVocab = kNumActivities + 1;

inline constexpr std::array<ActivityLabel, kNumActivities> kAllActivities = {
    ActivityLabel::kRunning,       ActivityLabel::kWalking,
    ActivityLabel::kSwimming,      ActivityLabel::kAerobicWorkout,
    ActivityLabel::kOutdoorBiking, ActivityLabel::kSport,
    ActivityLabel::kTreadmill};

std::string_view ActivityName(ActivityLabel label);
std::string_view IntensityName(IntensityCategory category);
// Throws std::invalid_argument on unknown names.
ActivityLabel ParseActivity(std::string_view name);

constexpr std::size_t ActivityIndex(ActivityLabel label) {
  return static_cast<std::size_t>(label);
}

using IntensityVector = std::array<double, kNumIntensityCategories>;

struct HrSample {
  Timestamp t;
  double bpm = 0.0;
};

struct IntensitySample {
  Timestamp t;
  IntensityVector levels{};
};

struct ActivitySegment {
  ActivityLabel label = ActivityLabel::kNone;
  Timestamp start;
  std::int64_t duration = 0;  // minutes, > 0

  Timestamp end() const { return start + duration; }
};

struct AnnotatedSample {
  Timestamp t;
  double hr = 0.0;
  IntensityVector intensity{};
  ActivityLabel activity = ActivityLabel::kNone;
};

struct TemporalFeatures {
  int month = 1;         // [1, 12]
  int day_of_month = 1;  // [1, 31]
  int day_of_week = 0;   // [0, 6], Monday = 0
  int hour = 0;          // [0, 23]
  int minute = 0;        // [0, 59]

  bool operator==(const TemporalFeatures&) const = default;
};

// Raised for malformed or inconsistent input data. `where` names the
// offending timestamp, file or row when known.
class DataError : public std::runtime_error {
 public:
  DataError(const std::string& what, std::string where = {})
      : std::runtime_error(where.empty() ? what : where + ": " + what),
        where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

// Inner join of the HR and intensity streams on timestamp. Both inputs must
// be strictly increasing; a duplicate or decreasing timestamp raises
// DataError naming it. Output activity labels are all kNone.
std::vector<AnnotatedSample> FuseSeries(std::span<const HrSample> hr,
                                        std::span<const IntensitySample> intensity);

struct SegmentViolation {
  // Indices into the input sequence of the first offending pair, in start
  // order (first starts no later than second).
  std::size_t first = 0;
  std::size_t second = 0;
};

// nullopt when no two segments overlap, i.e. start[k+1] >= start[k] +
// duration[k] after sorting by start. Non-positive durations throw DataError.
std::optional<SegmentViolation> ValidateSegments(
    std::span<const ActivitySegment> segments);

// Labels each sample with the segment whose closed interval [start, start +
// duration] contains it. On a shared boundary minute the later segment wins.
// Throws DataError when segments overlap.
std::vector<AnnotatedSample> LabelSeries(std::span<const AnnotatedSample> fused,
                                         std::span<const ActivitySegment> segments);

TemporalFeatures ComputeTemporalFeatures(Timestamp t);
int YearOf(Timestamp t);
Timestamp TimestampFromCivil(int year, int month, int day, int hour, int minute);

// "YYYY-MM-DDTHH:MM[:SS][Z]"; seconds must be zero. Throws DataError.
Timestamp ParseIso8601(std::string_view text);
std::string FormatIso8601(Timestamp t);

// Splits a time-ordered sample sequence at every gap in the 1-minute cadence.
std::vector<std::vector<AnnotatedSample>> SplitContiguousRuns(
    std::span<const AnnotatedSample> samples);

// Per-category min-max scaling to [0, 1], fitted on a training subset.
class IntensityScaler {
 public:
  IntensityScaler();
  static IntensityScaler Fit(std::span<const IntensityVector> values);
  static IntensityScaler FromBounds(const IntensityVector& lo,
                                    const IntensityVector& hi);

  // Values outside the fitted range are clamped to [0, 1].
  IntensityVector Apply(const IntensityVector& v) const;

  const IntensityVector& lo() const { return lo_; }
  const IntensityVector& hi() const { return hi_; }

 private:
  IntensityVector lo_;
  IntensityVector hi_;
};

// Index of the dominant category; ties go to the lower index.
IntensityCategory DominantIntensity(const IntensityVector& v);

}  // namespace hrdiff

#endif  // HRDIFF_SERIES_H_
