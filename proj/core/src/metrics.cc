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

#include "hrdiff/metrics.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hrdiff {

MetricSet ComputeMetrics(std::span<const double> y_true, std::span<const double> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw std::invalid_argument("metrics: " + std::to_string(y_true.size()) +
                                " true values vs " + std::to_string(y_pred.size()) +
                                " predictions");
  }
  if (y_true.empty()) throw std::invalid_argument("metrics: empty input");
  const auto n = static_cast<double>(y_true.size());
  double abs_sum = 0.0, pct_sum = 0.0, sq_sum = 0.0, mean = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] == 0.0) throw std::domain_error("metrics: MAPE undefined for a zero true value");
    const double e = y_pred[i] - y_true[i];
    abs_sum += std::abs(e);
    pct_sum += std::abs(e / y_true[i]);
    sq_sum += e * e;
    mean += y_true[i];
  }
  mean /= n;
  double total = 0.0;
  for (double y : y_true) total += (y - mean) * (y - mean);

  MetricSet m;
  m.count = y_true.size();
  m.mae = abs_sum / n;
  m.mape = 100.0 * pct_sum / n;
  m.rmse = std::sqrt(sq_sum / n);
  if (total > 0.0) {
    m.r2 = 1.0 - sq_sum / total;
  } else {
    m.r2_note = "undefined: true values have zero variance";
  }
  return m;
}

}  // namespace hrdiff
