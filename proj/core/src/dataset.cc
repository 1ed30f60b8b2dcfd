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

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace hrdiff {
namespace {

struct RunningStats {
  double n = 0.0, mean = 0.0, m2 = 0.0;

  void Add(double x) {
    n += 1.0;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  double Std() const {
    const double s = n > 0.0 ? std::sqrt(m2 / n) : 0.0;
    return s > 1e-9 ? s : 1.0;
  }
};

}  // namespace

std::vector<const WindowRecord*> Dataset::Partitioned(Partition p) const {
  std::vector<const WindowRecord*> out;
  for (const auto& w : windows) {
    if (w.partition == p) out.push_back(&w);
  }
  return out;
}

Dataset BuildDataset(std::span<const PatientData> patients, const DatasetOptions& options,
                     std::uint64_t seed) {
  Dataset ds;
  std::vector<std::size_t> local_segment;  // per window: patient-local key
  for (const auto& patient : patients) {
    const auto fused = FuseSeries(patient.hr, patient.intensity);
    const auto labelled = LabelSeries(fused, patient.segments);
    const std::size_t first_window = ds.windows.size();
    std::vector<std::size_t> seg_index;
    std::vector<bool> segment_used(patient.segments.size(), false);
    std::size_t skipped_here = 0;
    for (const auto& run : SplitContiguousRuns(labelled)) {
      auto built = BuildFeatureVectors(run, options.features);
      ds.short_runs += built.short_runs;
      auto windows = MakeWindows(built.features, patient.segments, options.window);
      skipped_here += windows.skipped_segments;
      for (std::size_t i = 0; i < windows.windows.size(); ++i) {
        WindowRecord rec;
        rec.window = std::move(windows.windows[i]);
        rec.patient_id = patient.id;
        ds.windows.push_back(std::move(rec));
        seg_index.push_back(windows.segment_of_window[i]);
        segment_used[windows.segment_of_window[i]] = true;
      }
    }
    ds.skipped_segments += skipped_here;
    // Dataset-wide ids in order of the patient's segment list.
    std::vector<std::size_t> global(patient.segments.size(), 0);
    for (std::size_t k = 0; k < patient.segments.size(); ++k) {
      if (segment_used[k]) global[k] = ds.segments++;
    }
    for (std::size_t i = first_window; i < ds.windows.size(); ++i) {
      ds.windows[i].segment_id = global[seg_index[i - first_window]];
    }
  }
  if (ds.windows.empty()) return ds;
  const auto parts = SplitSegments(ds.segments, options.ratios, seed);
  for (auto& w : ds.windows) w.partition = parts[w.segment_id];
  return ds;
}

Normalizer Normalizer::Fit(std::span<const WindowRecord* const> train) {
  if (train.empty()) throw std::invalid_argument("cannot fit a normalizer on no windows");
  std::array<RunningStats, 5> stats;
  std::vector<IntensityVector> intensities;
  for (const auto* rec : train) {
    for (const auto& f : rec->window.source) {
      const auto ch = f.channels();
      for (std::size_t c = 0; c < 5; ++c) stats[c].Add(ch[c]);
      intensities.push_back(f.intensity);
    }
    for (const auto& t : rec->window.target) stats[0].Add(t.hr);
  }
  Normalizer n;
  for (std::size_t c = 0; c < 5; ++c) {
    n.mean[c] = stats[c].mean;
    n.stddev[c] = stats[c].Std();
  }
  const auto scaler = IntensityScaler::Fit(intensities);
  n.intensity_lo = scaler.lo();
  n.intensity_hi = scaler.hi();
  return n;
}

std::string Normalizer::ToJson() const {
  nlohmann::ordered_json j = {{"channels", {"hr", "gradient", "rolling_std", "ema", "trend"}},
                              {"mean", mean},
                              {"stddev", stddev},
                              {"intensity_lo", intensity_lo},
                              {"intensity_hi", intensity_hi}};
  return j.dump(2);
}

Normalizer Normalizer::FromJson(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  Normalizer n;
  n.mean = j.at("mean").get<std::array<double, 5>>();
  n.stddev = j.at("stddev").get<std::array<double, 5>>();
  n.intensity_lo = j.at("intensity_lo").get<IntensityVector>();
  n.intensity_hi = j.at("intensity_hi").get<IntensityVector>();
  return n;
}

ModelInput EncodeWindow(const FeatureWindow& window, const Normalizer& normalizer) {
  if (window.source.size() != window.target.size()) {
    throw std::invalid_argument("window source and target lengths differ");
  }
  const auto scaler = IntensityScaler::FromBounds(normalizer.intensity_lo,
                                                  normalizer.intensity_hi);
  ModelInput in;
  const std::size_t l = window.source.size();
  for (auto& c : in.channels) c.reserve(l);
  for (const auto& f : window.source) {
    const auto ch = f.channels();
    for (std::size_t c = 0; c < 5; ++c) {
      in.channels[c].push_back((ch[c] - normalizer.mean[c]) / normalizer.stddev[c]);
    }
    in.source_activity.push_back(ActivityIndex(f.activity));
    in.source_intensity.push_back(
        static_cast<std::size_t>(DominantIntensity(scaler.Apply(f.intensity))));
    in.source_temporal.push_back(f.temporal);
  }
  for (const auto& t : window.target) in.target_activity.push_back(ActivityIndex(t.activity));
  in.anchor = window.anchor_activity;
  return in;
}

std::vector<double> EncodeTarget(const FeatureWindow& window, const Normalizer& normalizer) {
  std::vector<double> out;
  out.reserve(window.target.size());
  for (const auto& t : window.target) out.push_back(normalizer.NormalizeHr(t.hr));
  return out;
}

}  // namespace hrdiff
