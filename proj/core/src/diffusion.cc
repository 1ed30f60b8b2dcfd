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

#include "hrdiff/diffusion.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hrdiff/ops.h"

namespace hrdiff {
namespace {

void CheckStep(std::size_t s, const DiffusionSchedule& schedule) {
  if (s < 1 || s > schedule.steps()) {
    throw std::out_of_range("diffusion step " + std::to_string(s) + " outside [1, " +
                            std::to_string(schedule.steps()) + "]");
  }
}

Tensor Column(std::span<const double> v) {
  return Tensor::FromData({v.size(), 1}, std::vector<double>(v.begin(), v.end()));
}

}  // namespace

std::vector<double> SampleLaplace(std::size_t n, double b, Rng& rng) {
  if (b < 0.0) throw std::invalid_argument("Laplace scale must be >= 0");
  std::vector<double> out(n, 0.0);
  if (b == 0.0) return out;
  for (double& x : out) x = rng.Laplace(b);
  return out;
}

std::vector<double> ForwardMarginalWithNoise(std::span<const double> h0,
                                             std::span<const double> noise,
                                             std::size_t s,
                                             const DiffusionSchedule& schedule) {
  CheckStep(s, schedule);
  if (noise.size() != h0.size()) {
    throw std::invalid_argument("noise length does not match the sequence");
  }
  const double a = std::sqrt(schedule.alpha_bar(s));
  const double c = std::sqrt(1.0 - schedule.alpha_bar(s));
  std::vector<double> out(h0.size());
  for (std::size_t i = 0; i < h0.size(); ++i) out[i] = a * h0[i] + c * noise[i];
  return out;
}

Corrupted ForwardMarginal(std::span<const double> h0, std::size_t s,
                          const DiffusionSchedule& schedule, Rng& rng) {
  CheckStep(s, schedule);
  Corrupted c;
  c.noise = SampleLaplace(h0.size(), kUnitLaplaceScale, rng);
  c.noisy = ForwardMarginalWithNoise(h0, c.noise, s, schedule);
  return c;
}

std::vector<double> ReverseMean(std::span<const double> h_s,
                                std::span<const double> noise_hat, std::size_t s,
                                const DiffusionSchedule& schedule) {
  CheckStep(s, schedule);
  if (noise_hat.size() != h_s.size()) {
    throw std::invalid_argument("noise estimate length does not match the state");
  }
  const double a = schedule.alpha(s);
  const double one_minus_abar = 1.0 - schedule.alpha_bar(s);
  const double coef = one_minus_abar > 0.0 ? (1.0 - a) / std::sqrt(one_minus_abar) : 0.0;
  const double inv_sqrt_a = 1.0 / std::sqrt(a);
  std::vector<double> mu(h_s.size());
  for (std::size_t i = 0; i < h_s.size(); ++i) {
    mu[i] = inv_sqrt_a * (h_s[i] - coef * noise_hat[i]);
  }
  return mu;
}

std::vector<double> ReverseStep(std::span<const double> h_s,
                                std::span<const double> noise_hat, std::size_t s,
                                const DiffusionSchedule& schedule, Rng& rng) {
  std::vector<double> out = ReverseMean(h_s, noise_hat, s, schedule);
  if (s > 1) {
    const double scale = std::sqrt(schedule.beta_tilde(s) / 2.0);
    for (double& x : out) x += rng.Laplace(scale);
  }
  return out;
}

std::string LossConfig::Name() const {
  if (kind == LossKind::kL1) return "l1";
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), huber_delta);
  (void)ec;
  return "huber(" + std::string(buf, end) + ")";
}

LossConfig ParseLoss(std::string_view text) {
  if (text == "l1") return {LossKind::kL1, 1.0};
  if (text == "huber") return {LossKind::kHuber, 1.0};
  constexpr std::string_view kPrefix = "huber:";
  if (text.substr(0, kPrefix.size()) == kPrefix) {
    const std::string_view num = text.substr(kPrefix.size());
    double delta = 0.0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), delta);
    if (ec == std::errc() && ptr == num.data() + num.size() && delta > 0.0) {
      return {LossKind::kHuber, delta};
    }
  }
  throw std::invalid_argument("unknown loss '" + std::string(text) +
                              "' (expected l1, huber or huber:<delta>)");
}

Tensor NoiseLoss(const Tensor& predicted, const Tensor& target, const LossConfig& loss) {
  return loss.kind == LossKind::kL1 ? L1Loss(predicted, target)
                                    : HuberLoss(predicted, target, loss.huber_delta);
}

Tensor TransformerNoisePredictor::Condition(const ModelInput& input, std::size_t step,
                                            const ForwardContext& ctx) const {
  return model_.Encode(input, step, ctx);
}

Tensor TransformerNoisePredictor::Predict(const ModelInput& input, const Tensor& condition,
                                          const Tensor& noisy, std::size_t step,
                                          const ForwardContext& ctx) const {
  const Tensor target = model_.EmbedTarget(noisy, input, model_.StepEmbedding(step), ctx);
  return model_.Decode(target, condition, ctx);
}

Tensor DiffusionLoss(const NoisePredictor& predictor,
                     std::span<const TrainingExample> batch,
                     const DiffusionSchedule& schedule, const LossConfig& loss,
                     Rng& rng, const ForwardContext& ctx) {
  if (batch.empty()) throw std::invalid_argument("empty training batch");
  std::vector<Tensor> losses;
  losses.reserve(batch.size());
  for (const auto& ex : batch) {
    const std::size_t s = 1 + rng.Index(schedule.steps());
    const Corrupted c = ForwardMarginal(ex.target, s, schedule, rng);
    const Tensor noisy = Column(c.noisy);
    const Tensor condition = predictor.Condition(*ex.input, s, ctx);
    const Tensor pred = predictor.Predict(*ex.input, condition, noisy, s, ctx);
    losses.push_back(NoiseLoss(pred, Column(c.noise), loss));
  }
  const Tensor stacked = ConcatRows(losses);
  return Mean(stacked);
}

double Median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty set");
  const std::size_t n = values.size();
  std::sort(values.begin(), values.end());
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<double> ForecastNormalized(const NoisePredictor& predictor,
                                       const ModelInput& input,
                                       const DiffusionSchedule& schedule,
                                       std::size_t length, const ForecastOptions& options,
                                       std::vector<std::vector<double>>* chains) {
  if (options.samples == 0) throw std::invalid_argument("forecast needs K >= 1");
  NoGradGuard no_grad;
  const ForwardContext ctx;  // inference: no dropout
  std::vector<Rng> rngs;
  std::vector<std::vector<double>> state;
  for (std::size_t k = 0; k < options.samples; ++k) {
    rngs.push_back(Rng::Derive(options.seed, options.shared_chain_seed ? 0 : k));
    state.push_back(SampleLaplace(length, kUnitLaplaceScale, rngs.back()));
  }
  for (std::size_t s = schedule.steps(); s >= 1; --s) {
    const Tensor condition = predictor.Condition(input, s, ctx);
    for (std::size_t k = 0; k < options.samples; ++k) {
      const Tensor pred = predictor.Predict(input, condition, Column(state[k]), s, ctx);
      state[k] = ReverseStep(state[k], pred.values(), s, schedule, rngs[k]);
    }
  }
  std::vector<double> out(length);
  std::vector<double> column(options.samples);
  for (std::size_t t = 0; t < length; ++t) {
    for (std::size_t k = 0; k < options.samples; ++k) column[k] = state[k][t];
    out[t] = Median(column);
  }
  if (chains != nullptr) *chains = std::move(state);
  return out;
}

}  // namespace hrdiff
