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

#ifndef HRDIFF_SCHEDULE_H_
#define HRDIFF_SCHEDULE_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace hrdiff {

enum class ScheduleKind { kLinear, kQuadratic, kCosine, kCustom };

std::string_view ScheduleKindName(ScheduleKind kind);
// Accepts "linear", "quadratic", "cosine"; throws std::invalid_argument.
ScheduleKind ParseScheduleKind(std::string_view name);

// Noise tables for steps s = 1..S. Accessors take the 1-based step.
class DiffusionSchedule {
 public:
  static constexpr double kMaxBeta = 0.999;

  // linear / quadratic: endpoints (1e-4, 0.02) * 1000 / S, interpolated in
  // beta or in sqrt(beta). cosine: offset 0.008, beta clipped at kMaxBeta.
  static DiffusionSchedule Build(ScheduleKind kind, std::size_t steps);
  // Explicit betas, each in [0, kMaxBeta].
  static DiffusionSchedule FromBetas(std::vector<double> betas);

  ScheduleKind kind() const { return kind_; }
  std::size_t steps() const { return beta_.size(); }

  double beta(std::size_t s) const { return beta_.at(s - 1); }
  double alpha(std::size_t s) const { return alpha_.at(s - 1); }
  double alpha_bar(std::size_t s) const { return alpha_bar_.at(s - 1); }
  // Laplace scale whose variance 2 b^2 equals 1 - alpha_bar.
  double laplace_scale(std::size_t s) const { return b_.at(s - 1); }
  // Posterior variance (1 - alpha_bar[s-1]) / (1 - alpha_bar[s]) * beta[s];
  // equals beta[1] at s = 1.
  double beta_tilde(std::size_t s) const { return beta_tilde_.at(s - 1); }

 private:
  DiffusionSchedule(ScheduleKind kind, std::vector<double> betas);

  ScheduleKind kind_;
  std::vector<double> beta_, alpha_, alpha_bar_, b_, beta_tilde_;
};

}  // namespace hrdiff

#endif  // HRDIFF_SCHEDULE_H_
