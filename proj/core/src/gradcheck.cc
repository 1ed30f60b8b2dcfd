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

#include "hrdiff/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "hrdiff/rng.h"

namespace hrdiff {
namespace {

double Evaluate(const std::function<Tensor()>& f) {
  NoGradGuard guard;
  const double v = f().item();
  if (!std::isfinite(v)) throw std::domain_error("gradient check: f is not finite");
  return v;
}

}  // namespace

GradCheckResult GradientCheck(const std::function<Tensor()>& f,
                              std::vector<Tensor> params,
                              const GradCheckOptions& options) {
  for (auto& p : params) p.ZeroGrad();
  const Tensor out = f();
  if (!std::isfinite(out.item())) {
    throw std::domain_error("gradient check: f is not finite");
  }
  out.Backward();
  std::vector<std::vector<double>> analytic;
  for (const auto& p : params) analytic.push_back(p.grad());

  std::vector<std::pair<std::size_t, std::size_t>> coords;
  for (std::size_t k = 0; k < params.size(); ++k) {
    for (std::size_t i = 0; i < params[k].size(); ++i) coords.emplace_back(k, i);
  }
  if (options.max_coordinates > 0 && coords.size() > options.max_coordinates) {
    Rng rng(options.seed);
    rng.Shuffle(coords);
    coords.resize(options.max_coordinates);
  }

  GradCheckResult result;
  for (const auto& [k, i] : coords) {
    auto& values = params[k].mutable_values();
    const double saved = values[i];
    values[i] = saved + options.step;
    const double plus = Evaluate(f);
    values[i] = saved - options.step;
    const double minus = Evaluate(f);
    values[i] = saved;
    const double numeric = (plus - minus) / (2.0 * options.step);
    const double a = analytic[k][i];
    if (!std::isfinite(a)) throw std::domain_error("gradient check: gradient not finite");
    const double err =
        std::abs(a - numeric) / std::max({1.0, std::abs(a), std::abs(numeric)});
    ++result.coordinates;
    if (err >= result.max_rel_error) {
      result.max_rel_error = err;
      result.worst_param = k;
      result.worst_index = i;
      result.worst_analytic = a;
      result.worst_numeric = numeric;
    }
  }
  return result;
}

}  // namespace hrdiff
