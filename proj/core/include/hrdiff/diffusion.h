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

// Laplace diffusion over normalised HR target sequences.
//
// Forward: h_s = sqrt(abar_s) h_0 + sqrt(1 - abar_s) u with unit-variance
// noise u ~ Laplace(0, 1/sqrt(2)); the network predicts u.
// Reverse: h_{s-1} = (h_s - (1 - a_s) / sqrt(1 - abar_s) u_hat) / sqrt(a_s)
// plus Laplace noise with variance beta_tilde_s for s > 1.

#ifndef HRDIFF_DIFFUSION_H_
#define HRDIFF_DIFFUSION_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hrdiff/hr_transformer.h"
#include "hrdiff/rng.h"
#include "hrdiff/schedule.h"
#include "hrdiff/tensor.h"

namespace hrdiff {

// Scale of unit-variance Laplace noise.
inline constexpr double kUnitLaplaceScale = 0.70710678118654752440;

// n draws of Laplace(0, b); b = 0 gives zeros. Throws for b < 0.
std::vector<double> SampleLaplace(std::size_t n, double b, Rng& rng);

struct Corrupted {
  std::vector<double> noisy;  // h_s
  std::vector<double> noise;  // u, the regression target
};

// Throws std::out_of_range unless 1 <= s <= S.
Corrupted ForwardMarginal(std::span<const double> h0, std::size_t s,
                          const DiffusionSchedule& schedule, Rng& rng);
// Same, with the unit noise supplied.
std::vector<double> ForwardMarginalWithNoise(std::span<const double> h0,
                                             std::span<const double> noise,
                                             std::size_t s,
                                             const DiffusionSchedule& schedule);

std::vector<double> ReverseMean(std::span<const double> h_s,
                                std::span<const double> noise_hat, std::size_t s,
                                const DiffusionSchedule& schedule);
// Adds Laplace noise of scale sqrt(beta_tilde_s / 2) for s > 1.
std::vector<double> ReverseStep(std::span<const double> h_s,
                                std::span<const double> noise_hat, std::size_t s,
                                const DiffusionSchedule& schedule, Rng& rng);

enum class LossKind { kL1, kHuber };

struct LossConfig {
  LossKind kind = LossKind::kL1;
  double huber_delta = 1.0;

  std::string Name() const;  // "l1" or "huber(0.4)"
};

// Parses "l1", "huber" (delta 1) or "huber:<delta>".
LossConfig ParseLoss(std::string_view text);

Tensor NoiseLoss(const Tensor& predicted, const Tensor& target, const LossConfig& loss);

// Anything that predicts the unit noise of a corrupted target. Condition()
// holds the work shared by every chain of one input at one step.
class NoisePredictor {
 public:
  virtual ~NoisePredictor() = default;
  virtual Tensor Condition(const ModelInput& input, std::size_t step,
                           const ForwardContext& ctx) const = 0;
  // noisy is L x 1; result L x 1.
  virtual Tensor Predict(const ModelInput& input, const Tensor& condition,
                         const Tensor& noisy, std::size_t step,
                         const ForwardContext& ctx) const = 0;
};

class TransformerNoisePredictor : public NoisePredictor {
 public:
  explicit TransformerNoisePredictor(const HrTransformer& model) : model_(model) {}
  Tensor Condition(const ModelInput& input, std::size_t step,
                   const ForwardContext& ctx) const override;
  Tensor Predict(const ModelInput& input, const Tensor& condition, const Tensor& noisy,
                 std::size_t step, const ForwardContext& ctx) const override;

 private:
  const HrTransformer& model_;
};

struct TrainingExample {
  const ModelInput* input = nullptr;
  std::vector<double> target;  // normalised h_0, length L
};

// Mean loss over a batch: each example draws s uniformly from 1..S and its
// own noise, in batch order, from `rng`. The graph is left for the caller to
// back-propagate.
Tensor DiffusionLoss(const NoisePredictor& predictor,
                     std::span<const TrainingExample> batch,
                     const DiffusionSchedule& schedule, const LossConfig& loss,
                     Rng& rng, const ForwardContext& ctx);

struct ForecastOptions {
  std::size_t samples = 10;  // K
  std::uint64_t seed = 0;
  // Chain k uses Rng::Derive(seed, k); with this set every chain uses stream
  // 0 and the chains coincide.
  bool shared_chain_seed = false;
};

// Runs K reverse chains from Laplace(0, 1/sqrt(2)) noise in lockstep and
// returns the elementwise median (normalised units). `chains`, if given,
// receives every chain's final state.
std::vector<double> ForecastNormalized(const NoisePredictor& predictor,
                                       const ModelInput& input,
                                       const DiffusionSchedule& schedule,
                                       std::size_t length, const ForecastOptions& options,
                                       std::vector<std::vector<double>>* chains = nullptr);

double Median(std::vector<double> values);

}  // namespace hrdiff

#endif  // HRDIFF_DIFFUSION_H_
