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

// One-axis ablations over the noise schedule, the number of diffusion steps
// and the training loss. Every cell trains from scratch with the same seed.

#ifndef HRDIFF_SWEEP_H_
#define HRDIFF_SWEEP_H_

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "hrdiff/dataset.h"
#include "hrdiff/hr_transformer.h"
#include "hrdiff/metrics.h"
#include "hrdiff/trainer.h"

namespace hrdiff {

enum class SweepAxis { kSchedule, kSteps, kLoss };

std::string_view SweepAxisName(SweepAxis axis);
// "schedule", "steps" or "loss"; throws std::invalid_argument otherwise.
SweepAxis ParseSweepAxis(std::string_view name);

// The cells of an axis as training configs derived from `base`.
std::vector<TrainConfig> SweepCells(SweepAxis axis, const TrainConfig& base);
// Column value of a cell: "cosine", "100", "huber(0.4)".
std::string SweepCellLabel(SweepAxis axis, const TrainConfig& cell);

struct SweepRow {
  std::string value;
  ScheduleKind schedule = ScheduleKind::kCosine;
  std::size_t steps = 0;
  std::string loss;
  std::uint64_t seed = 0;
  MetricSet metrics;
  std::size_t epochs_run = 0;
  double best_val_loss = 0.0;
  bool diverged = false;
  // Wall-clock; excluded from the deterministic table.
  double train_seconds = 0.0;
  double inference_seconds_per_window = 0.0;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::kSchedule;
  std::vector<SweepRow> rows;
};

SweepResult RunSweep(const Dataset& dataset, const ModelConfig& model,
                     const TrainConfig& base, SweepAxis axis, std::uint64_t seed,
                     const std::function<void(const SweepRow&)>& on_cell = {});

// axis,value,schedule,steps,loss,seed,epochs,mae,mape,rmse,r2
std::string SweepTableCsv(const SweepResult& result);
// axis,value,train_seconds,inference_seconds_per_window
std::string SweepTimingCsv(const SweepResult& result);

}  // namespace hrdiff

#endif  // HRDIFF_SWEEP_H_
