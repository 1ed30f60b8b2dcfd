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

#include "hrdiff/config.h"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hrdiff/rng.h"
#include "json.hpp"

namespace hrdiff {
namespace {

using Json = nlohmann::ordered_json;

Json ProfileJson(const ActivityProfile& p) {
  return {{"proportion", p.proportion},
          {"mean_duration_min", p.mean_duration_min},
          {"median_hr", p.median_hr},
          {"volatility", p.volatility}};
}

Json ToJsonTree(const RunConfig& c, bool with_paths) {
  const auto& g = c.generator;
  Json activities = Json::object();
  for (const auto& p : g.activities) activities[std::string(ActivityName(p.label))] = ProfileJson(p);
  const auto& t = c.training;
  Json j;
  j["seed"] = c.seed;
  j["generator"] = {{"n_patients", g.n_patients},
                    {"days_per_patient", g.days_per_patient},
                    {"session_probability", g.session_probability},
                    {"min_segments_per_activity", g.min_segments_per_activity},
                    {"resting_hr_min", g.resting_hr_min},
                    {"resting_hr_max", g.resting_hr_max},
                    {"patient_offset_bpm", g.patient_offset_bpm},
                    {"circadian_amplitude", g.circadian_amplitude},
                    {"relax_minutes", g.relax_minutes},
                    {"process_noise_bpm", g.process_noise_bpm},
                    {"observation_noise_bpm", g.observation_noise_bpm},
                    {"shock_rate", g.shock_rate},
                    {"shock_scale_bpm", g.shock_scale_bpm},
                    {"shock_decay_minutes", g.shock_decay_minutes},
                    {"shift_rate", g.shift_rate},
                    {"lead_in_min", g.lead_in_min},
                    {"lead_in_max", g.lead_in_max},
                    {"recovery_min", g.recovery_min},
                    {"recovery_max", g.recovery_max},
                    {"start_year", g.start_year},
                    {"activities", activities}};
  j["preprocess"] = {{"smooth_window", c.preprocess.smooth_window},
                     {"contamination", c.preprocess.contamination},
                     {"trees", c.preprocess.trees},
                     {"subsample", c.preprocess.subsample},
                     {"sudden_threshold", c.preprocess.sudden.threshold},
                     {"sudden_horizons", c.preprocess.sudden.horizons}};
  j["features"] = {{"ema_alpha", c.features.ema_alpha},
                   {"std_window", c.features.std_window},
                   {"trend_lag", c.features.trend_lag},
                   {"trend_window", c.features.trend_window}};
  j["split"] = {{"train", c.split.train},
                {"validation", c.split.validation},
                {"test", c.split.test}};
  j["model"] = Json::parse(c.model.ToJson());
  j["diffusion"] = {{"schedule", std::string(ScheduleKindName(t.schedule))},
                    {"steps", t.diffusion_steps},
                    {"samples", t.forecast_samples},
                    {"loss", t.loss.kind == LossKind::kL1
                                 ? std::string("l1")
                                 : "huber:" + Json(t.loss.huber_delta).dump()}};
  j["training"] = {{"epochs", t.epochs},
                   {"batch_size", t.batch_size},
                   {"learning_rate", t.learning_rate},
                   {"weight_decay", t.weight_decay},
                   {"lr_milestones", t.lr_milestones},
                   {"lr_gamma", t.lr_gamma},
                   {"patience", t.patience},
                   {"min_delta", t.min_delta}};
  if (with_paths) j["paths"] = {{"data", c.paths.data}, {"checkpoint", c.paths.checkpoint}};
  return j;
}

std::string TypeName(const Json& v) {
  if (v.is_number_unsigned()) return "non-negative integer";
  if (v.is_number_integer()) return "integer";
  if (v.is_number_float()) return "number";
  return v.type_name();
}

bool Compatible(const Json& def, const Json& v) {
  if (def.is_number_unsigned()) return v.is_number_unsigned();
  if (def.is_number_integer()) return v.is_number_integer();
  if (def.is_number_float()) return v.is_number();
  if (def.is_array()) {
    if (!v.is_array()) return false;
    if (def.empty()) return true;
    for (const auto& e : v) {
      if (!Compatible(def.front(), e)) return false;
    }
    return true;
  }
  return def.type() == v.type();
}

// Overlays `user` onto the defaults tree, rejecting keys and types the
// defaults do not have.
void Merge(Json& base, const Json& user, const std::string& where) {
  if (!user.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : user.items()) {
    const std::string path = where.empty() ? key : where + "." + key;
    if (!base.contains(key)) throw ConfigError("unknown config key '" + path + "'");
    Json& slot = base[key];
    if (slot.is_object()) {
      Merge(slot, value, path);
    } else if (!Compatible(slot, value)) {
      throw ConfigError("config key '" + path + "' expects " + TypeName(slot) + ", got " +
                        TypeName(value));
    } else {
      slot = value;
    }
  }
}

RunConfig FromTree(const Json& j) {
  RunConfig c;
  c.seed = j.at("seed").get<std::uint64_t>();
  const auto& g = j.at("generator");
  auto& gc = c.generator;
  gc.n_patients = g.at("n_patients").get<std::size_t>();
  gc.days_per_patient = g.at("days_per_patient").get<std::size_t>();
  gc.session_probability = g.at("session_probability").get<double>();
  gc.min_segments_per_activity = g.at("min_segments_per_activity").get<std::size_t>();
  gc.resting_hr_min = g.at("resting_hr_min").get<double>();
  gc.resting_hr_max = g.at("resting_hr_max").get<double>();
  gc.patient_offset_bpm = g.at("patient_offset_bpm").get<double>();
  gc.circadian_amplitude = g.at("circadian_amplitude").get<double>();
  gc.relax_minutes = g.at("relax_minutes").get<double>();
  gc.process_noise_bpm = g.at("process_noise_bpm").get<double>();
  gc.observation_noise_bpm = g.at("observation_noise_bpm").get<double>();
  gc.shock_rate = g.at("shock_rate").get<double>();
  gc.shock_scale_bpm = g.at("shock_scale_bpm").get<double>();
  gc.shock_decay_minutes = g.at("shock_decay_minutes").get<double>();
  gc.shift_rate = g.at("shift_rate").get<double>();
  gc.lead_in_min = g.at("lead_in_min").get<std::size_t>();
  gc.lead_in_max = g.at("lead_in_max").get<std::size_t>();
  gc.recovery_min = g.at("recovery_min").get<std::size_t>();
  gc.recovery_max = g.at("recovery_max").get<std::size_t>();
  gc.start_year = g.at("start_year").get<int>();
  for (auto& p : gc.activities) {
    const auto& a = g.at("activities").at(std::string(ActivityName(p.label)));
    p.proportion = a.at("proportion").get<double>();
    p.mean_duration_min = a.at("mean_duration_min").get<double>();
    p.median_hr = a.at("median_hr").get<double>();
    p.volatility = a.at("volatility").get<double>();
  }
  const auto& pp = j.at("preprocess");
  c.preprocess.smooth_window = pp.at("smooth_window").get<std::size_t>();
  c.preprocess.contamination = pp.at("contamination").get<double>();
  c.preprocess.trees = pp.at("trees").get<std::size_t>();
  c.preprocess.subsample = pp.at("subsample").get<std::size_t>();
  c.preprocess.sudden.threshold = pp.at("sudden_threshold").get<double>();
  c.preprocess.sudden.horizons = pp.at("sudden_horizons").get<std::vector<std::size_t>>();
  const auto& f = j.at("features");
  c.features.ema_alpha = f.at("ema_alpha").get<double>();
  c.features.std_window = f.at("std_window").get<std::size_t>();
  c.features.trend_lag = f.at("trend_lag").get<std::size_t>();
  c.features.trend_window = f.at("trend_window").get<std::size_t>();
  const auto& s = j.at("split");
  c.split.train = s.at("train").get<double>();
  c.split.validation = s.at("validation").get<double>();
  c.split.test = s.at("test").get<double>();
  c.model = ModelConfig::FromJson(j.at("model").dump());
  const auto& d = j.at("diffusion");
  auto& t = c.training;
  try {
    t.schedule = ParseScheduleKind(d.at("schedule").get<std::string>());
    t.loss = ParseLoss(d.at("loss").get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("diffusion: ") + e.what());
  }
  t.diffusion_steps = d.at("steps").get<std::size_t>();
  t.forecast_samples = d.at("samples").get<std::size_t>();
  const auto& tr = j.at("training");
  t.epochs = tr.at("epochs").get<std::size_t>();
  t.batch_size = tr.at("batch_size").get<std::size_t>();
  t.learning_rate = tr.at("learning_rate").get<double>();
  t.weight_decay = tr.at("weight_decay").get<double>();
  t.lr_milestones = tr.at("lr_milestones").get<std::vector<std::size_t>>();
  t.lr_gamma = tr.at("lr_gamma").get<double>();
  t.patience = tr.at("patience").get<std::size_t>();
  t.min_delta = tr.at("min_delta").get<double>();
  c.paths.data = j.at("paths").at("data").get<std::string>();
  c.paths.checkpoint = j.at("paths").at("checkpoint").get<std::string>();
  return c;
}

}  // namespace

RunConfig RunConfig::FromJson(const std::string& text) {
  Json user;
  try {
    user = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  Json tree = ToJsonTree(RunConfig{}, true);
  Merge(tree, user, "");
  RunConfig c;
  try {
    c = FromTree(tree);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.Validate();
  return c;
}

RunConfig RunConfig::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return FromJson(text.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string RunConfig::ToJson(bool with_paths) const {
  return ToJsonTree(*this, with_paths).dump(2) + "\n";
}

std::uint64_t RunConfig::Hash() const { return Fnv1a64(ToJsonTree(*this, false).dump()); }

std::string RunConfig::HashHex() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, Hash());
  return buf;
}

void RunConfig::Validate() const {
  auto check = [](auto&& fn) {
    try {
      fn();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  };
  check([&] { ValidateGeneratorConfig(generator_config()); });
  check([&] { model.Validate(); });
  check([&] { SplitSegments(3, split, 0); });
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (!(features.ema_alpha > 0.0 && features.ema_alpha <= 1.0)) {
    fail("features.ema_alpha must lie in (0, 1]");
  }
  if (features.std_window < 2) fail("features.std_window must be >= 2");
  if (features.trend_lag == 0 || features.trend_window == 0) {
    fail("features.trend_lag and features.trend_window must be >= 1");
  }
  if (preprocess.smooth_window % 2 == 0) fail("preprocess.smooth_window must be odd");
  if (!(preprocess.contamination > 0.0 && preprocess.contamination < 0.5)) {
    fail("preprocess.contamination must lie in (0, 0.5)");
  }
  if (preprocess.trees == 0 || preprocess.subsample < 2) {
    fail("preprocess.trees must be >= 1 and preprocess.subsample >= 2");
  }
  if (training.diffusion_steps == 0) fail("diffusion.steps must be >= 1");
  if (training.forecast_samples == 0) fail("diffusion.samples must be >= 1");
  if (training.batch_size == 0) fail("training.batch_size must be >= 1");
  if (!(training.learning_rate > 0.0) || !std::isfinite(training.learning_rate)) {
    fail("training.learning_rate must be positive");
  }
  if (training.weight_decay < 0.0) fail("training.weight_decay must be >= 0");
  if (!(training.lr_gamma > 0.0)) fail("training.lr_gamma must be positive");
  if (training.min_delta < 0.0) fail("training.min_delta must be >= 0");
}

DatasetOptions RunConfig::dataset_options() const {
  DatasetOptions o;
  o.features = features;
  o.window = model.window;
  o.ratios = split;
  return o;
}

GeneratorConfig RunConfig::generator_config() const {
  GeneratorConfig g = generator;
  g.seed = MixSeed(seed ^ Fnv1a64("generator"));
  return g;
}

}  // namespace hrdiff
