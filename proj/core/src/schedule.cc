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

#include "hrdiff/schedule.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hrdiff {
namespace {

constexpr double kBetaStart = 1e-4;
constexpr double kBetaEnd = 0.02;
constexpr double kCosineOffset = 0.008;

double CosineF(double s, double total) {
  const double c = std::cos((s / total + kCosineOffset) / (1.0 + kCosineOffset) *
                            std::numbers::pi / 2.0);
  return c * c;
}

}  // namespace

std::string_view ScheduleKindName(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::kLinear:
      return "linear";
    case ScheduleKind::kQuadratic:
      return "quadratic";
    case ScheduleKind::kCosine:
      return "cosine";
    case ScheduleKind::kCustom:
      return "custom";
  }
  return "custom";
}

ScheduleKind ParseScheduleKind(std::string_view name) {
  if (name == "linear") return ScheduleKind::kLinear;
  if (name == "quadratic") return ScheduleKind::kQuadratic;
  if (name == "cosine") return ScheduleKind::kCosine;
  throw std::invalid_argument("unknown schedule kind '" + std::string(name) +
                              "' (expected linear, quadratic or cosine)");
}

DiffusionSchedule DiffusionSchedule::Build(ScheduleKind kind, std::size_t steps) {
  if (steps == 0) throw std::invalid_argument("diffusion steps must be >= 1");
  const double n = static_cast<double>(steps);
  std::vector<double> betas(steps);
  switch (kind) {
    case ScheduleKind::kLinear:
    case ScheduleKind::kQuadratic: {
      const double scale = 1000.0 / n;
      const double lo = kBetaStart * scale;
      const double hi = kBetaEnd * scale;
      for (std::size_t i = 0; i < steps; ++i) {
        const double f = steps == 1 ? 0.0 : static_cast<double>(i) / (n - 1.0);
        double b;
        if (kind == ScheduleKind::kLinear) {
          b = lo + (hi - lo) * f;
        } else {
          const double r = std::sqrt(lo) + (std::sqrt(hi) - std::sqrt(lo)) * f;
          b = r * r;
        }
        betas[i] = std::min(b, kMaxBeta);
      }
      break;
    }
    case ScheduleKind::kCosine: {
      for (std::size_t i = 0; i < steps; ++i) {
        const double s = static_cast<double>(i + 1);
        betas[i] = std::min(1.0 - CosineF(s, n) / CosineF(s - 1.0, n), kMaxBeta);
      }
      break;
    }
    case ScheduleKind::kCustom:
      throw std::invalid_argument("custom schedules are built with FromBetas");
  }
  return DiffusionSchedule(kind, std::move(betas));
}

DiffusionSchedule DiffusionSchedule::FromBetas(std::vector<double> betas) {
  return DiffusionSchedule(ScheduleKind::kCustom, std::move(betas));
}

DiffusionSchedule::DiffusionSchedule(ScheduleKind kind, std::vector<double> betas)
    : kind_(kind), beta_(std::move(betas)) {
  if (beta_.empty()) throw std::invalid_argument("schedule needs at least one step");
  const std::size_t n = beta_.size();
  alpha_.resize(n);
  alpha_bar_.resize(n);
  b_.resize(n);
  beta_tilde_.resize(n);
  double running = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(beta_[i] >= 0.0 && beta_[i] <= kMaxBeta)) {
      throw std::invalid_argument("beta at step " + std::to_string(i + 1) +
                                  " outside [0, 0.999]");
    }
    alpha_[i] = 1.0 - beta_[i];
    running *= alpha_[i];
    alpha_bar_[i] = running;
    b_[i] = std::sqrt((1.0 - alpha_bar_[i]) / 2.0);
    if (i == 0) {
      beta_tilde_[i] = beta_[i];
    } else {
      const double denom = 1.0 - alpha_bar_[i];
      beta_tilde_[i] = denom > 0.0 ? (1.0 - alpha_bar_[i - 1]) / denom * beta_[i] : 0.0;
    }
  }
}

}  // namespace hrdiff
