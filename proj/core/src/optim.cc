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

#include "hrdiff/optim.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hrdiff {

Adam::Adam(std::vector<Tensor> params, AdamOptions options)
    : params_(std::move(params)), options_(options) {
  for (const auto& p : params_) {
    if (!p.requires_grad()) {
      throw std::invalid_argument("Adam: parameter does not require grad");
    }
    m_.emplace_back(p.size(), 0.0);
    v_.emplace_back(p.size(), 0.0);
  }
}

bool Adam::Step() {
  for (const auto& p : params_) {
    if (!p.has_grad()) continue;
    for (double g : p.node()->grad) {
      if (!std::isfinite(g)) {
        ++skipped_;
        return false;
      }
    }
  }
  ++step_;
  const double b1 = options_.beta1, b2 = options_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  for (std::size_t k = 0; k < params_.size(); ++k) {
    auto& value = params_[k].mutable_values();
    if (options_.weight_decay != 0.0) {
      const double shrink = 1.0 - options_.lr * options_.weight_decay;
      for (double& w : value) w *= shrink;
    }
    if (!params_[k].has_grad()) continue;
    const auto& grad = params_[k].node()->grad;
    auto& m = m_[k];
    auto& v = v_[k];
    for (std::size_t i = 0; i < value.size(); ++i) {
      m[i] = b1 * m[i] + (1.0 - b1) * grad[i];
      v[i] = b2 * v[i] + (1.0 - b2) * grad[i] * grad[i];
      const double m_hat = m[i] / c1;
      const double v_hat = v[i] / c2;
      value[i] -= options_.lr * m_hat / (std::sqrt(v_hat) + options_.eps);
    }
  }
  return true;
}

void Adam::ZeroGrad() {
  for (auto& p : params_) p.ZeroGrad();
}

MultiStepLr::MultiStepLr(double base_lr, std::vector<std::size_t> milestones,
                         double gamma)
    : base_lr_(base_lr), milestones_(std::move(milestones)), gamma_(gamma) {
  std::sort(milestones_.begin(), milestones_.end());
}

double MultiStepLr::LrAt(std::size_t epoch) const {
  const auto passed = std::upper_bound(milestones_.begin(), milestones_.end(), epoch) -
                      milestones_.begin();
  return base_lr_ * std::pow(gamma_, static_cast<double>(passed));
}

EarlyStopping::EarlyStopping(std::size_t patience, double min_delta)
    : patience_(patience), min_delta_(min_delta) {}

bool EarlyStopping::Update(double loss) {
  ++epochs_;
  improved_last_ = loss < best_ - min_delta_;
  if (improved_last_) {
    best_ = loss;
    best_epoch_ = epochs_;
    stale_ = 0;
  } else {
    ++stale_;
  }
  return patience_ > 0 && stale_ >= patience_;
}

}  // namespace hrdiff
