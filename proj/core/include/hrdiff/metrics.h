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

#ifndef HRDIFF_METRICS_H_
#define HRDIFF_METRICS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>

namespace hrdiff {

struct MetricSet {
  std::size_t count = 0;
  double mae = 0.0;
  double mape = 0.0;  // percent, true values in the denominator
  double rmse = 0.0;
  std::optional<double> r2;
  std::string r2_note;  // why r2 is missing
};

// Throws std::invalid_argument for empty or unequal inputs and
// std::domain_error when a true value is 0 (MAPE undefined).
MetricSet ComputeMetrics(std::span<const double> y_true, std::span<const double> y_pred);

// Headline figures reported for the private cohort. Shown next to synthetic
// results for orientation only; they cannot be reproduced here.
struct ReferenceMetrics {
  double mae = 2.19;
  double mape = 2.3;
  double rmse = 3.44;
  double r2 = 0.97;
};

}  // namespace hrdiff

#endif  // HRDIFF_METRICS_H_
