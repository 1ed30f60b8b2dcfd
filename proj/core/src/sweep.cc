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

#include "hrdiff/sweep.h"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace hrdiff {
namespace {

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

std::string_view SweepAxisName(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kSchedule: return "schedule";
    case SweepAxis::kSteps: return "steps";
    case SweepAxis::kLoss: return "loss";
  }
  return "?";
}

SweepAxis ParseSweepAxis(std::string_view name) {
  if (name == "schedule") return SweepAxis::kSchedule;
  if (name == "steps") return SweepAxis::kSteps;
  if (name == "loss") return SweepAxis::kLoss;
  throw std::invalid_argument("unknown sweep axis '" + std::string(name) +
                              "' (expected schedule, steps or loss)");
}

std::vector<TrainConfig> SweepCells(SweepAxis axis, const TrainConfig& base) {
  std::vector<TrainConfig> cells;
  switch (axis) {
    case SweepAxis::kSchedule:
      for (auto k : {ScheduleKind::kLinear, ScheduleKind::kQuadratic, ScheduleKind::kCosine}) {
        cells.push_back(base);
        cells.back().schedule = k;
      }
      break;
    case SweepAxis::kSteps:
      for (std::size_t s : {50, 100, 200}) {
        cells.push_back(base);
        cells.back().diffusion_steps = s;
      }
      break;
    case SweepAxis::kLoss:
      cells.push_back(base);
      cells.back().loss = {LossKind::kL1, 1.0};
      for (double delta : {1.0, 0.4, 0.1}) {
        cells.push_back(base);
        cells.back().loss = {LossKind::kHuber, delta};
      }
      break;
  }
  return cells;
}

std::string SweepCellLabel(SweepAxis axis, const TrainConfig& cell) {
  switch (axis) {
    case SweepAxis::kSchedule: return std::string(ScheduleKindName(cell.schedule));
    case SweepAxis::kSteps: return std::to_string(cell.diffusion_steps);
    case SweepAxis::kLoss: return cell.loss.Name();
  }
  return "";
}

SweepResult RunSweep(const Dataset& dataset, const ModelConfig& model,
                     const TrainConfig& base, SweepAxis axis, std::uint64_t seed,
                     const std::function<void(const SweepRow&)>& on_cell) {
  SweepResult result;
  result.axis = axis;
  for (const auto& cell : SweepCells(axis, base)) {
    const auto exp = RunExperiment(dataset, model, cell, seed);
    SweepRow row;
    row.value = SweepCellLabel(axis, cell);
    row.schedule = cell.schedule;
    row.steps = cell.diffusion_steps;
    row.loss = cell.loss.Name();
    row.seed = seed;
    row.metrics = exp.test.overall;
    row.epochs_run = exp.train.history.size();
    row.best_val_loss = exp.train.best_val_loss;
    row.diverged = exp.train.diverged;
    row.train_seconds = exp.train.seconds;
    row.inference_seconds_per_window =
        exp.test_windows == 0 ? 0.0 : exp.test.seconds / static_cast<double>(exp.test_windows);
    if (on_cell) on_cell(row);
    result.rows.push_back(std::move(row));
  }
  return result;
}

std::string SweepTableCsv(const SweepResult& result) {
  std::ostringstream out;
  out << "axis,value,schedule,steps,loss,seed,epochs,mae,mape,rmse,r2\n";
  for (const auto& r : result.rows) {
    out << SweepAxisName(result.axis) << ',' << r.value << ',' << ScheduleKindName(r.schedule)
        << ',' << r.steps << ',' << r.loss << ',' << r.seed << ',' << r.epochs_run << ','
        << Num(r.metrics.mae) << ',' << Num(r.metrics.mape) << ',' << Num(r.metrics.rmse) << ','
        << (r.metrics.r2 ? Num(*r.metrics.r2) : "nan") << '\n';
  }
  return out.str();
}

std::string SweepTimingCsv(const SweepResult& result) {
  std::ostringstream out;
  out << "axis,value,train_seconds,inference_seconds_per_window\n";
  for (const auto& r : result.rows) {
    out << SweepAxisName(result.axis) << ',' << r.value << ',' << Num(r.train_seconds) << ','
        << Num(r.inference_seconds_per_window) << '\n';
  }
  return out.str();
}

}  // namespace hrdiff
