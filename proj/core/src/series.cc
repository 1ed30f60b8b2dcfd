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

#include "hrdiff/series.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <numeric>

namespace hrdiff {
namespace {

constexpr std::array<std::string_view, kActivityVocab> kActivityNames = {
    "running", "walking", "swimming", "aerobic_workout",
    "outdoor_biking", "sport", "treadmill", "none"};

constexpr std::array<std::string_view, kNumIntensityCategories>
    kIntensityNames = {"sedentary", "lightly_active", "fairly_active",
                       "very_active"};

constexpr std::int64_t kMinutesPerDay = 1440;

std::int64_t FloorDiv(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::chrono::year_month_day CivilDay(Timestamp t) {
  const std::chrono::sys_days day{
      std::chrono::days{FloorDiv(t.minutes, kMinutesPerDay)}};
  return std::chrono::year_month_day{day};
}

template <typename Int>
bool ParseInt(std::string_view s, Int& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

void CheckStrictlyIncreasing(Timestamp prev, Timestamp cur,
                             std::string_view stream) {
  if (cur == prev) {
    throw DataError("duplicate timestamp in " + std::string(stream) +
                        " stream",
                    FormatIso8601(cur));
  }
  if (cur < prev) {
    throw DataError("non-monotone timestamp in " + std::string(stream) +
                        " stream",
                    FormatIso8601(cur));
  }
}

}  // namespace

std::string_view ActivityName(ActivityLabel label) {
  return kActivityNames.at(ActivityIndex(label));
}

std::string_view IntensityName(IntensityCategory category) {
  return kIntensityNames.at(static_cast<std::size_t>(category));
}

ActivityLabel ParseActivity(std::string_view name) {
  for (std::size_t i = 0; i < kActivityNames.size(); ++i) {
    if (kActivityNames[i] == name) return static_cast<ActivityLabel>(i);
  }
  throw std::invalid_argument("unknown activity label '" + std::string(name) +
                              "'");
}

std::vector<AnnotatedSample> FuseSeries(
    std::span<const HrSample> hr, std::span<const IntensitySample> intensity) {
  for (std::size_t i = 1; i < hr.size(); ++i) {
    CheckStrictlyIncreasing(hr[i - 1].t, hr[i].t, "hr");
  }
  for (std::size_t i = 1; i < intensity.size(); ++i) {
    CheckStrictlyIncreasing(intensity[i - 1].t, intensity[i].t, "intensity");
  }
  std::vector<AnnotatedSample> out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < hr.size() && j < intensity.size()) {
    if (hr[i].t < intensity[j].t) {
      ++i;
    } else if (intensity[j].t < hr[i].t) {
      ++j;
    } else {
      out.push_back({hr[i].t, hr[i].bpm, intensity[j].levels,
                     ActivityLabel::kNone});
      ++i;
      ++j;
    }
  }
  return out;
}

std::optional<SegmentViolation> ValidateSegments(
    std::span<const ActivitySegment> segments) {
  for (std::size_t k = 0; k < segments.size(); ++k) {
    if (segments[k].duration <= 0) {
      throw DataError("segment " + std::to_string(k) +
                          " has non-positive duration " +
                          std::to_string(segments[k].duration),
                      FormatIso8601(segments[k].start));
    }
  }
  std::vector<std::size_t> order(segments.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return segments[a].start < segments[b].start;
  });
  for (std::size_t k = 1; k < order.size(); ++k) {
    const auto& prev = segments[order[k - 1]];
    const auto& cur = segments[order[k]];
    if (cur.start < prev.end()) return SegmentViolation{order[k - 1], order[k]};
  }
  return std::nullopt;
}

std::vector<AnnotatedSample> LabelSeries(
    std::span<const AnnotatedSample> fused,
    std::span<const ActivitySegment> segments) {
  if (auto violation = ValidateSegments(segments)) {
    throw DataError("activity segments " + std::to_string(violation->first) +
                        " and " + std::to_string(violation->second) +
                        " overlap",
                    FormatIso8601(segments[violation->second].start));
  }
  std::vector<ActivitySegment> sorted(segments.begin(), segments.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.start < b.start; });

  std::vector<AnnotatedSample> out(fused.begin(), fused.end());
  for (auto& sample : out) {
    // Last segment starting at or before t. With non-overlapping segments an
    // earlier one can only contain t at the shared boundary minute, where
    // the later segment takes precedence.
    auto it = std::upper_bound(
        sorted.begin(), sorted.end(), sample.t,
        [](Timestamp t, const ActivitySegment& s) { return t < s.start; });
    sample.activity = ActivityLabel::kNone;
    if (it != sorted.begin()) {
      const auto& seg = *std::prev(it);
      if (sample.t <= seg.end()) sample.activity = seg.label;
    }
  }
  return out;
}

TemporalFeatures ComputeTemporalFeatures(Timestamp t) {
  const auto ymd = CivilDay(t);
  const std::chrono::weekday wd{std::chrono::sys_days{ymd}};
  const std::int64_t minute_of_day =
      t.minutes - FloorDiv(t.minutes, kMinutesPerDay) * kMinutesPerDay;
  TemporalFeatures f;
  f.month = static_cast<int>(static_cast<unsigned>(ymd.month()));
  f.day_of_month = static_cast<int>(static_cast<unsigned>(ymd.day()));
  f.day_of_week = static_cast<int>(wd.iso_encoding()) - 1;
  f.hour = static_cast<int>(minute_of_day / 60);
  f.minute = static_cast<int>(minute_of_day % 60);
  return f;
}

int YearOf(Timestamp t) { return static_cast<int>(CivilDay(t).year()); }

Timestamp TimestampFromCivil(int year, int month, int day, int hour,
                             int minute) {
  const std::chrono::year_month_day ymd{
      std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
      std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok()) {
    throw DataError("invalid calendar date " + std::to_string(year) + "-" +
                    std::to_string(month) + "-" + std::to_string(day));
  }
  const auto days = std::chrono::sys_days{ymd}.time_since_epoch().count();
  return Timestamp{static_cast<std::int64_t>(days) * kMinutesPerDay +
                   hour * 60 + minute};
}

Timestamp ParseIso8601(std::string_view text) {
  const std::string context(text);
  std::string_view s = text;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.back() == 'Z') s.remove_suffix(1);
  // YYYY-MM-DDTHH:MM or YYYY-MM-DDTHH:MM:SS
  if (s.size() != 16 && s.size() != 19) {
    throw DataError("malformed ISO-8601 timestamp", context);
  }
  if (s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') ||
      s[13] != ':' || (s.size() == 19 && s[16] != ':')) {
    throw DataError("malformed ISO-8601 timestamp", context);
  }
  int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
  if (!ParseInt(s.substr(0, 4), year) || !ParseInt(s.substr(5, 2), month) ||
      !ParseInt(s.substr(8, 2), day) || !ParseInt(s.substr(11, 2), hour) ||
      !ParseInt(s.substr(14, 2), minute) ||
      (s.size() == 19 && !ParseInt(s.substr(17, 2), second))) {
    throw DataError("malformed ISO-8601 timestamp", context);
  }
  if (hour > 23 || minute > 59) {
    throw DataError("time of day out of range", context);
  }
  if (second != 0) {
    throw DataError("timestamps must fall on whole minutes", context);
  }
  return TimestampFromCivil(year, month, day, hour, minute);
}

std::string FormatIso8601(Timestamp t) {
  const auto ymd = CivilDay(t);
  const auto f = ComputeTemporalFeatures(t);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02dZ",
                static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), f.hour, f.minute);
  return buf;
}

std::vector<std::vector<AnnotatedSample>> SplitContiguousRuns(
    std::span<const AnnotatedSample> samples) {
  std::vector<std::vector<AnnotatedSample>> runs;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i == 0 || samples[i].t - samples[i - 1].t != 1) runs.emplace_back();
    runs.back().push_back(samples[i]);
  }
  return runs;
}

IntensityScaler::IntensityScaler() {
  lo_.fill(0.0);
  hi_.fill(1.0);
}

IntensityScaler IntensityScaler::Fit(std::span<const IntensityVector> values) {
  IntensityScaler s;
  if (values.empty()) return s;
  s.lo_ = values.front();
  s.hi_ = values.front();
  for (const auto& v : values) {
    for (std::size_t c = 0; c < kNumIntensityCategories; ++c) {
      s.lo_[c] = std::min(s.lo_[c], v[c]);
      s.hi_[c] = std::max(s.hi_[c], v[c]);
    }
  }
  return s;
}

IntensityScaler IntensityScaler::FromBounds(const IntensityVector& lo,
                                            const IntensityVector& hi) {
  IntensityScaler s;
  s.lo_ = lo;
  s.hi_ = hi;
  return s;
}

IntensityVector IntensityScaler::Apply(const IntensityVector& v) const {
  IntensityVector out{};
  for (std::size_t c = 0; c < kNumIntensityCategories; ++c) {
    const double range = hi_[c] - lo_[c];
    // A category that never varied in training carries no information.
    const double x = range > 0.0 ? (v[c] - lo_[c]) / range : 0.0;
    out[c] = std::clamp(x, 0.0, 1.0);
  }
  return out;
}

IntensityCategory DominantIntensity(const IntensityVector& v) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumIntensityCategories; ++c) {
    if (v[c] > v[best]) best = c;
  }
  return static_cast<IntensityCategory>(best);
}

}  // namespace hrdiff
