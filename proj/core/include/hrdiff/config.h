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

// Run configuration shared by every pipeline stage. The file format is JSON
// with one section per stage; any key may be omitted and takes its default.
//
//   {
//     "seed": 42,
//     "generator":  { "n_patients": 29, ..., "activities": { "walking": {...} } },
//     "preprocess": { "smooth_window": 5, "contamination": 0.05, ... },
//     "features":   { "ema_alpha": 0.333, "std_window": 5, ... },
//     "split":      { "train": 0.65, "validation": 0.15, "test": 0.2 },
//     "model":      { "d_model": 128, "window": 10, ... },
//     "diffusion":  { "schedule": "cosine", "steps": 50, "samples": 10, "loss": "l1" },
//     "training":   { "epochs": 400, "batch_size": 32, ... },
//     "paths":      { "data": "", "checkpoint": "" }
//   }
//
// The window length L lives under "model" and also drives windowing.

#ifndef HRDIFF_CONFIG_H_
#define HRDIFF_CONFIG_H_

#include <cstdint>
#include <stdexcept>
#include <string>

#include "hrdiff/dataset.h"
#include "hrdiff/hr_transformer.h"
#include "hrdiff/preprocess.h"
#include "hrdiff/synthgen.h"
#include "hrdiff/trainer.h"

#ifndef HRDIFF_VERSION
#define HRDIFF_VERSION "0.0.0"
#endif

namespace hrdiff {

inline constexpr const char* kToolVersion = HRDIFF_VERSION;

// Unknown keys, wrong types and out-of-range values.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunPaths {
  std::string data;
  std::string checkpoint;
};

struct RunConfig {
  std::uint64_t seed = 42;
  GeneratorConfig generator;  // generator.seed is derived from `seed`
  PreprocessOptions preprocess;
  FeatureParams features;
  SplitRatios split;
  ModelConfig model;
  TrainConfig training;  // also carries the diffusion section
  RunPaths paths;        // not part of the hash

  // Throws ConfigError.
  static RunConfig FromJson(const std::string& text);
  static RunConfig FromFile(const std::string& path);

  // Canonical form: every key, fixed order, no paths when `with_paths` is false.
  std::string ToJson(bool with_paths = true) const;
  // FNV-1a of the canonical form without paths.
  std::uint64_t Hash() const;
  std::string HashHex() const;

  // Throws ConfigError on values no stage accepts.
  void Validate() const;

  DatasetOptions dataset_options() const;
  // Generator settings with the seed derived from the run seed.
  GeneratorConfig generator_config() const;
};

}  // namespace hrdiff

#endif  // HRDIFF_CONFIG_H_
