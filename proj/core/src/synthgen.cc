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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "hrdiff/rng.h"

namespace hrdiff {
namespace {

constexpr double kHrFloor = 30.0;
constexpr double kHrCeiling = 220.0;

struct SessionPlan {
  Timestamp start;  // first minute of the lead-in
  ActivityLabel label = ActivityLabel::kWalking;
};

std::string PatientId(std::size_t i) {
  std::string digits = std::to_string(i);
  while (digits.size() < 3) digits.insert(digits.begin(), '0');
  return "patient_" + digits;
}

ActivityLabel DrawLabel(Rng& rng, const std::array<double, kNumActivities>& cdf) {
  const double u = rng.Uniform();
  for (std::size_t a = 0; a < kNumActivities; ++a) {
    if (u < cdf[a]) return static_cast<ActivityLabel>(a);
  }
  return static_cast<ActivityLabel>(kNumActivities - 1);
}

const ActivityProfile& ProfileFor(const GeneratorConfig& config,
                                  ActivityLabel label) {
  for (const auto& p : config.activities) {
    if (p.label == label) return p;
  }
  throw std::invalid_argument("no profile for activity " +
                              std::string(ActivityName(label)));
}

double Quantile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  const auto k = static_cast<std::size_t>(q * static_cast<double>(v.size() - 1));
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
  return v[k];
}

void SimulatePatient(const GeneratorConfig& config,
                     const std::vector<SessionPlan>& sessions, Rng& rng,
                     PatientData& patient) {
  const double resting = rng.Uniform(config.resting_hr_min, config.resting_hr_max);
  const double offset =
      rng.Uniform(-config.patient_offset_bpm, config.patient_offset_bpm);

  for (const auto& plan : sessions) {
    const auto& profile = ProfileFor(config, plan.label);
    const auto lead_in = config.lead_in_min +
                         rng.Index(config.lead_in_max - config.lead_in_min + 1);
    const auto recovery = config.recovery_min +
                          rng.Index(config.recovery_max - config.recovery_min + 1);
    // Gamma(4) durations keep the configured mean with moderate spread.
    const double shape = 4.0;
    auto duration = static_cast<std::int64_t>(
        std::lround(rng.Gamma(shape) * profile.mean_duration_min / shape));
    duration = std::max<std::int64_t>(duration, 5);

    const Timestamp seg_start = plan.start + static_cast<std::int64_t>(lead_in);
    patient.segments.push_back({plan.label, seg_start, duration});

    const std::int64_t total =
        static_cast<std::int64_t>(lead_in) + duration + 1 +
        static_cast<std::int64_t>(recovery);
    const double base_set = profile.median_hr + offset;
    double activity_set = base_set;
    const auto warmup = static_cast<std::int64_t>(std::lround(config.relax_minutes));
    double x = resting;
    double shock = 0.0;
    for (std::int64_t m = 0; m < total; ++m) {
      const Timestamp t = plan.start + m;
      // The set-point leads the labelled segment by one relaxation time so the
      // segment's HR is centred on the profile median.
      const bool active = t >= seg_start - warmup && t <= seg_start + duration;
      const auto tf = ComputeTemporalFeatures(t);
      const double hour = tf.hour + tf.minute / 60.0;
      const double rest_set =
          resting + config.circadian_amplitude *
                        std::sin(2.0 * std::numbers::pi * (hour - 10.0) / 24.0);
      if (active && rng.Bernoulli(config.shift_rate)) {
        activity_set = base_set + profile.volatility * rng.Normal();
      }
      const double set_point = active ? activity_set : rest_set;
      x += (set_point - x) / config.relax_minutes;
      x += config.process_noise_bpm * rng.Normal();
      shock -= shock / config.shock_decay_minutes;
      if (rng.Bernoulli(config.shock_rate)) shock += rng.Laplace(config.shock_scale_bpm);
      const double latent = std::clamp(x + shock, kHrFloor, kHrCeiling);
      const double observed = std::clamp(
          latent + config.observation_noise_bpm * rng.Normal(), kHrFloor, kHrCeiling);
      // Rounded to 0.1 BPM like device exports.
      patient.hr.push_back({t, std::round(observed * 10.0) / 10.0});
    }
  }

  // Intensity from the patient's own HR quantile bands.
  std::vector<double> values;
  values.reserve(patient.hr.size());
  for (const auto& s : patient.hr) values.push_back(s.bpm);
  const double q50 = Quantile(values, 0.50);
  const double q75 = Quantile(values, 0.75);
  const double q90 = Quantile(values, 0.90);
  patient.intensity.reserve(patient.hr.size());
  for (const auto& s : patient.hr) {
    IntensitySample is{s.t, {0.0, 0.0, 0.0, 0.0}};
    std::size_t band = 0;
    if (s.bpm > q90) {
      band = 3;
    } else if (s.bpm > q75) {
      band = 2;
    } else if (s.bpm > q50) {
      band = 1;
    }
    is.levels[band] = 1.0;
    patient.intensity.push_back(is);
  }
}

}  // namespace

std::array<ActivityProfile, kNumActivities> DefaultActivityProfiles() {
  using A = ActivityLabel;
  // Shares are the cohort's "% of total" column; they sum to 0.975 and are
  // normalised when sampling.
  return {{
      {A::kWalking, 0.595, 89.0, 99.0, 3.5},
      {A::kRunning, 0.122, 70.0, 128.0, 6.3},
      {A::kAerobicWorkout, 0.10, 86.0, 112.0, 5.2},
      {A::kOutdoorBiking, 0.064, 33.0, 90.0, 4.0},
      {A::kSport, 0.047, 39.0, 105.0, 5.5},
      {A::kSwimming, 0.037, 43.0, 110.0, 4.0},
      {A::kTreadmill, 0.01, 130.0, 75.0, 3.0},
  }};
}

void ValidateGeneratorConfig(const GeneratorConfig& config) {
  double total = 0.0;
  std::array<bool, kNumActivities> seen{};
  for (const auto& p : config.activities) {
    if (p.label == ActivityLabel::kNone) {
      throw std::invalid_argument("activity profile cannot use label 'none'");
    }
    if (seen[ActivityIndex(p.label)]) {
      throw std::invalid_argument("duplicate activity profile for " +
                                  std::string(ActivityName(p.label)));
    }
    seen[ActivityIndex(p.label)] = true;
    if (p.proportion < 0.0) throw std::invalid_argument("negative proportion");
    if (p.mean_duration_min <= 0.0) {
      throw std::invalid_argument("activity durations must be positive");
    }
    if (p.volatility < 0.0) throw std::invalid_argument("negative volatility");
    total += p.proportion;
  }
  if (total <= 0.0) throw std::invalid_argument("activity proportions are all zero");
  if (config.resting_hr_min > config.resting_hr_max ||
      config.lead_in_min > config.lead_in_max ||
      config.recovery_min > config.recovery_max) {
    throw std::invalid_argument("generator ranges must satisfy min <= max");
  }
  if (config.relax_minutes < 1.0 || config.shock_decay_minutes < 1.0) {
    throw std::invalid_argument("relax_minutes and shock_decay_minutes must be >= 1");
  }
  if (config.session_probability < 0.0 || config.session_probability > 1.0 ||
      config.shock_rate < 0.0 || config.shock_rate > 1.0 ||
      config.shift_rate < 0.0 || config.shift_rate > 1.0) {
    throw std::invalid_argument("rates must lie in [0, 1]");
  }
}

std::vector<PatientData> Generate(const GeneratorConfig& config) {
  ValidateGeneratorConfig(config);
  std::vector<PatientData> patients;
  if (config.n_patients == 0) return patients;

  std::array<double, kNumActivities> cdf{};
  {
    double total = 0.0;
    for (const auto& p : config.activities) total += p.proportion;
    double acc = 0.0;
    for (std::size_t a = 0; a < kNumActivities; ++a) {
      acc += ProfileFor(config, static_cast<ActivityLabel>(a)).proportion / total;
      cdf[a] = acc;
    }
  }

  // Pass 1: session days and start times per patient.
  std::vector<std::vector<SessionPlan>> plans(config.n_patients);
  const Timestamp day0 = TimestampFromCivil(config.start_year, 1, 1, 0, 0);
  for (std::size_t p = 0; p < config.n_patients; ++p) {
    Rng rng = Rng::Derive(config.seed, "schedule/" + std::to_string(p));
    for (std::size_t d = 0; d < config.days_per_patient; ++d) {
      if (!rng.Bernoulli(config.session_probability)) continue;
      const auto minute_of_day = static_cast<std::int64_t>(6 * 60 + rng.Index(14 * 60));
      plans[p].push_back(
          {day0 + static_cast<std::int64_t>(d) * 1440 + minute_of_day,
           ActivityLabel::kWalking});
    }
  }

  // Labels come from one dataset-wide stream so minimum counts can be
  // enforced across patients.
  Rng label_rng = Rng::Derive(config.seed, "labels");
  std::array<std::size_t, kNumActivities> counts{};
  std::vector<SessionPlan*> all;
  for (auto& patient_plans : plans) {
    for (auto& plan : patient_plans) {
      plan.label = DrawLabel(label_rng, cdf);
      ++counts[ActivityIndex(plan.label)];
      all.push_back(&plan);
    }
  }
  for (std::size_t a = 0; a < kNumActivities; ++a) {
    while (counts[a] < config.min_segments_per_activity) {
      const auto donor = static_cast<std::size_t>(
          std::max_element(counts.begin(), counts.end()) - counts.begin());
      if (donor == a || counts[donor] <= config.min_segments_per_activity) break;
      // Reassign a random session of the most common activity.
      std::vector<SessionPlan*> donors;
      for (auto* plan : all) {
        if (ActivityIndex(plan->label) == donor) donors.push_back(plan);
      }
      donors[label_rng.Index(donors.size())]->label = static_cast<ActivityLabel>(a);
      --counts[donor];
      ++counts[a];
    }
  }

  // Pass 2: dynamics.
  patients.resize(config.n_patients);
  for (std::size_t p = 0; p < config.n_patients; ++p) {
    patients[p].id = PatientId(p);
    Rng rng = Rng::Derive(config.seed, "dynamics/" + std::to_string(p));
    SimulatePatient(config, plans[p], rng, patients[p]);
  }
  return patients;
}

std::vector<Partition> SplitSegments(std::size_t n_segments,
                                     const SplitRatios& ratios,
                                     std::uint64_t seed) {
  const std::array<double, 3> r = {ratios.train, ratios.validation, ratios.test};
  for (double v : r) {
    if (v < 0.0) throw std::invalid_argument("split ratios must be non-negative");
  }
  if (std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9) {
    throw std::invalid_argument("split ratios must sum to 1");
  }
  const auto nonempty = static_cast<std::size_t>(std::count_if(
      r.begin(), r.end(), [](double v) { return v > 0.0; }));
  if (n_segments < nonempty) {
    throw std::invalid_argument("fewer segments (" + std::to_string(n_segments) +
                                ") than non-empty splits (" +
                                std::to_string(nonempty) + ")");
  }
  const double n = static_cast<double>(n_segments);
  std::array<std::size_t, 3> counts{};
  counts[0] = static_cast<std::size_t>(std::lround(r[0] * n));
  counts[1] = std::min(static_cast<std::size_t>(std::lround(r[1] * n)),
                       n_segments - counts[0]);
  counts[2] = n_segments - counts[0] - counts[1];
  for (std::size_t k = 0; k < 3; ++k) {
    if (r[k] > 0.0 && counts[k] == 0) {
      const auto largest = static_cast<std::size_t>(
          std::max_element(counts.begin(), counts.end()) - counts.begin());
      --counts[largest];
      ++counts[k];
    } else if (r[k] == 0.0 && counts[k] > 0) {
      const auto target = static_cast<std::size_t>(
          std::max_element(r.begin(), r.end()) - r.begin());
      counts[target] += counts[k];
      counts[k] = 0;
    }
  }

  std::vector<std::size_t> order(n_segments);
  std::iota(order.begin(), order.end(), 0);
  Rng rng = Rng::Derive(seed, "split");
  rng.Shuffle(order);
  std::vector<Partition> out(n_segments, Partition::kTrain);
  std::size_t pos = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t c = 0; c < counts[k]; ++c) {
      out[order[pos++]] = static_cast<Partition>(k);
    }
  }
  return out;
}

}  // namespace hrdiff
