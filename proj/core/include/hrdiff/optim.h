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

#ifndef HRDIFF_OPTIM_H_
#define HRDIFF_OPTIM_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "hrdiff/tensor.h"

namespace hrdiff {

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;  // decoupled
};

// Adam with bias correction. Weight decay is applied directly to the weights
// (p -= lr * wd * p) and never enters the moment estimates.
class Adam {
 public:
  Adam(std::vector<Tensor> params, AdamOptions options);

  // Applies one update from the accumulated gradients. If any gradient is
  // non-finite nothing changes, the skip counter grows and false is returned.
  bool Step();
  void ZeroGrad();

  void set_lr(double lr) { options_.lr = lr; }
  double lr() const { return options_.lr; }
  std::int64_t steps() const { return step_; }
  std::int64_t skipped_steps() const { return skipped_; }
  const std::vector<std::vector<double>>& first_moments() const { return m_; }
  const std::vector<std::vector<double>>& second_moments() const { return v_; }

 private:
  std::vector<Tensor> params_;
  AdamOptions options_;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  std::int64_t step_ = 0;
  std::int64_t skipped_ = 0;
};

// Learning rate multiplied by `gamma` at each milestone epoch reached.
// Epochs count from 1; at epoch e the factor is gamma^(#milestones <= e).
class MultiStepLr {
 public:
  MultiStepLr(double base_lr, std::vector<std::size_t> milestones, double gamma);
  double LrAt(std::size_t epoch) const;

 private:
  double base_lr_;
  std::vector<std::size_t> milestones_;
  double gamma_;
};

// Stops when the monitored loss fails to beat the best by more than
// min_delta for `patience` consecutive epochs.
class EarlyStopping {
 public:
  EarlyStopping(std::size_t patience, double min_delta);

  // Records the loss of the next epoch; returns true if training should stop.
  bool Update(double loss);

  bool improved_last() const { return improved_last_; }
  double best() const { return best_; }
  std::size_t best_epoch() const { return best_epoch_; }
  std::size_t epochs_seen() const { return epochs_; }

 private:
  std::size_t patience_;
  double min_delta_;
  double best_ = std::numeric_limits<double>::infinity();
  std::size_t best_epoch_ = 0;
  std::size_t epochs_ = 0;
  std::size_t stale_ = 0;
  bool improved_last_ = false;
};

}  // namespace hrdiff

#endif  // HRDIFF_OPTIM_H_
