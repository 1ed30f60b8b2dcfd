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

#include <gtest/gtest.h>

#include <cmath>

#include "hrdiff/schedule.h"
#include "model_fixtures.h"
#include "oracles.h"

namespace hrdiff {
namespace {

TEST(ScheduleTest, IdentitiesHoldForEveryKindAndLength) {
  for (auto kind : {ScheduleKind::kLinear, ScheduleKind::kQuadratic, ScheduleKind::kCosine}) {
    for (std::size_t steps : {50u, 100u, 200u}) {
      SCOPED_TRACE(std::string(ScheduleKindName(kind)) + "/" + std::to_string(steps));
      const auto s = DiffusionSchedule::Build(kind, steps);
      ASSERT_EQ(s.steps(), steps);
      const auto r = fixture::CheckScheduleIdentities(s);
      EXPECT_TRUE(r.alpha_bar_recursion_exact);
      EXPECT_LT(r.max_laplace_scale_error, 1e-12);
      EXPECT_TRUE(r.beta_tilde_first_is_beta);
      EXPECT_TRUE(r.snr_strictly_decreasing);
      for (std::size_t k = 1; k <= steps; ++k) {
        EXPECT_GE(s.beta(k), 0.0);
        EXPECT_LE(s.beta(k), 0.999);
      }
      for (std::size_t k = 2; k <= steps; ++k) {
        const double expected = (1 - s.alpha_bar(k - 1)) / (1 - s.alpha_bar(k)) * s.beta(k);
        EXPECT_NEAR(s.beta_tilde(k), expected, 1e-15);
      }
    }
  }
}

TEST(ScheduleTest, LinearEndpointsScaleWithSteps) {
  const auto s = DiffusionSchedule::Build(ScheduleKind::kLinear, 100);
  EXPECT_NEAR(s.beta(1), 1e-3, 1e-15);
  EXPECT_NEAR(s.beta(100), 0.2, 1e-15);
  const auto q = DiffusionSchedule::Build(ScheduleKind::kQuadratic, 100);
  EXPECT_NEAR(q.beta(1), 1e-3, 1e-15);
  EXPECT_NEAR(q.beta(100), 0.2, 1e-15);
  EXPECT_LT(q.beta(50), s.beta(50));
}

TEST(ScheduleTest, CosineNearlyDestroysTheSignal) {
  const auto s = DiffusionSchedule::Build(ScheduleKind::kCosine, 50);
  EXPECT_LT(s.alpha_bar(50), 1e-6);
  EXPECT_EQ(s.beta(50), DiffusionSchedule::kMaxBeta);
  EXPECT_GT(s.alpha_bar(1), 0.99);
}

TEST(ScheduleTest, ParsingAndErrors) {
  EXPECT_EQ(ParseScheduleKind("cosine"), ScheduleKind::kCosine);
  EXPECT_EQ(ScheduleKindName(ScheduleKind::kQuadratic), "quadratic");
  EXPECT_THROW(ParseScheduleKind("sigmoid"), std::invalid_argument);
  EXPECT_THROW(DiffusionSchedule::Build(ScheduleKind::kLinear, 0), std::invalid_argument);
  EXPECT_THROW(DiffusionSchedule::FromBetas({0.1, 1.0}), std::invalid_argument);
  const auto s = DiffusionSchedule::FromBetas({0.1, 0.2});
  EXPECT_DOUBLE_EQ(s.alpha_bar(2), 0.9 * 0.8);
  EXPECT_THROW(s.beta(3), std::out_of_range);
}

TEST(LaplaceSamplerTest, UnitScaleMoments) {
  Rng rng(31);
  const auto x = SampleLaplace(1000000, 1.0, rng);
  const auto m = oracle::SampleMoments(x);
  EXPECT_NEAR(m.mean, 0.0, 0.01);
  EXPECT_NEAR(m.variance, 2.0, 0.05);
  EXPECT_NEAR(m.excess_kurtosis, 3.0, 0.3);
  Rng g(31);
  std::vector<double> gauss(1000000);
  for (auto& v : gauss) v = std::sqrt(2.0) * g.Normal();
  EXPECT_GT(std::abs(oracle::SampleMoments(gauss).excess_kurtosis - 3.0), 0.3);
  Rng u(1);
  const auto unit = SampleLaplace(200000, kUnitLaplaceScale, u);
  EXPECT_NEAR(oracle::SampleMoments(unit).variance, 1.0, 0.03);
  EXPECT_EQ(SampleLaplace(3, 0.0, u), std::vector<double>(3, 0.0));
  EXPECT_THROW(SampleLaplace(3, -1.0, u), std::invalid_argument);
}

TEST(ForwardMarginalTest, MatchesClosedForm) {
  const auto s = DiffusionSchedule::Build(ScheduleKind::kCosine, 50);
  const std::vector<double> h0 = {1.0, -2.0, 0.5}, u = {0.3, 0.0, -1.0};
  const auto hs = ForwardMarginalWithNoise(h0, u, 20, s);
  for (std::size_t t = 0; t < 3; ++t) {
    EXPECT_NEAR(hs[t], std::sqrt(s.alpha_bar(20)) * h0[t] +
                           std::sqrt(1 - s.alpha_bar(20)) * u[t], 1e-15);
  }
  Rng rng(2);
  const auto c = ForwardMarginal(h0, 20, s, rng);
  EXPECT_EQ(ForwardMarginalWithNoise(h0, c.noise, 20, s), c.noisy);
  EXPECT_THROW(ForwardMarginal(h0, 0, s, rng), std::out_of_range);
  EXPECT_THROW(ForwardMarginal(h0, 51, s, rng), std::out_of_range);
}

TEST(ReverseTest, MeanInvertsFirstStepExactly) {
  const auto s = DiffusionSchedule::Build(ScheduleKind::kLinear, 50);
  const std::vector<double> h0 = {0.7, -1.1}, u = {0.4, -0.2};
  const auto h1 = ForwardMarginalWithNoise(h0, u, 1, s);
  const auto back = ReverseMean(h1, u, 1, s);
  EXPECT_NEAR(back[0], h0[0], 1e-12);
  EXPECT_NEAR(back[1], h0[1], 1e-12);
  Rng rng(1);
  EXPECT_EQ(ReverseStep(h1, u, 1, s, rng), back);  // no noise at s = 1
}

TEST(ReverseTest, NoiseScaleFollowsPosteriorVariance) {
  const auto s = DiffusionSchedule::Build(ScheduleKind::kCosine, 50);
  const std::vector<double> zeros(200000, 0.0);
  Rng rng(8);
  const auto mean = ReverseMean(zeros, zeros, 30, s);
  const auto step = ReverseStep(zeros, zeros, 30, s, rng);
  std::vector<double> diff(step.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = step[i] - mean[i];
  EXPECT_NEAR(oracle::SampleMoments(diff).variance / s.beta_tilde(30), 1.0, 0.03);
}

TEST(CheatingDenoiserTest, RecoversTheTarget) {
  for (auto kind : {ScheduleKind::kLinear, ScheduleKind::kCosine}) {
    const auto s = DiffusionSchedule::Build(kind, 50);
    EXPECT_LT(fixture::CheatingRoundTripRmse(s, 100, 10, 17), 0.05);
  }
}

TEST(LossTest, ParseAndNames) {
  EXPECT_EQ(ParseLoss("l1").kind, LossKind::kL1);
  EXPECT_EQ(ParseLoss("huber").huber_delta, 1.0);
  const auto h = ParseLoss("huber:0.4");
  EXPECT_EQ(h.kind, LossKind::kHuber);
  EXPECT_DOUBLE_EQ(h.huber_delta, 0.4);
  EXPECT_EQ(h.Name(), "huber(0.4)");
  EXPECT_EQ(ParseLoss("l1").Name(), "l1");
  EXPECT_THROW(ParseLoss("l2"), std::invalid_argument);
  EXPECT_THROW(ParseLoss("huber:-1"), std::invalid_argument);
  const auto p = Tensor::FromData({2, 1}, {3.0, 0.0});
  const auto t = Tensor::Zeros({2, 1});
  EXPECT_DOUBLE_EQ(NoiseLoss(p, t, {}).item(), 1.5);
  EXPECT_DOUBLE_EQ(NoiseLoss(p, t, h).item(), 0.4 * (3.0 - 0.2) / 2.0);
}

TEST(MedianTest, OddEvenAndEmpty) {
  EXPECT_EQ(Median({3, 1, 2}), 2);
  EXPECT_EQ(Median({4, 1, 2, 3}), 2.5);
  EXPECT_THROW(Median({}), std::invalid_argument);
}

TEST(ForecastTest, ChainsAreSeededAndMedianCombined) {
  const auto s = DiffusionSchedule::Build(ScheduleKind::kCosine, 20);
  const fixture::CheatingPredictor zero({0, 0, 0}, s);
  ForecastOptions o;
  o.samples = 5;
  o.seed = 3;
  std::vector<std::vector<double>> chains;
  const auto a = ForecastNormalized(zero, {}, s, 3, o, &chains);
  ASSERT_EQ(chains.size(), 5u);
  for (std::size_t t = 0; t < 3; ++t) {
    std::vector<double> col;
    for (const auto& c : chains) col.push_back(c[t]);
    EXPECT_EQ(a[t], Median(col));
  }
  EXPECT_EQ(ForecastNormalized(zero, {}, s, 3, o), a);
  o.shared_chain_seed = true;
  std::vector<std::vector<double>> shared;
  ForecastNormalized(zero, {}, s, 3, o, &shared);
  for (const auto& c : shared) EXPECT_EQ(c, shared[0]);
  o.samples = 0;
  EXPECT_THROW(ForecastNormalized(zero, {}, s, 3, o), std::invalid_argument);
}

TEST(ScheduleTest, HandBuiltTables) {
  const auto s = DiffusionSchedule::FromBetas({0.1, 0.2});
  EXPECT_DOUBLE_EQ(s.alpha_bar(1), 0.9);
  EXPECT_DOUBLE_EQ(s.alpha_bar(2), 0.72);
  EXPECT_DOUBLE_EQ(s.beta_tilde(1), 0.1);
  EXPECT_NEAR(s.beta_tilde(2), 0.1 / 0.28 * 0.2, 1e-15);
  for (auto kind : {ScheduleKind::kLinear, ScheduleKind::kQuadratic, ScheduleKind::kCosine}) {
    const auto one = DiffusionSchedule::Build(kind, 1);
    EXPECT_EQ(one.alpha_bar(1), 1.0 - one.beta(1));
  }
}

TEST(ReverseTest, ZeroBetaIsIdentity) {
  const auto s = DiffusionSchedule::FromBetas({0.1, 0.0, 0.3});
  const std::vector<double> h = {0.5, -0.25}, u = {3.0, -2.0};
  Rng rng(1);
  EXPECT_EQ(ReverseStep(h, u, 2, s, rng), h);
}

TEST(ForwardMarginalTest, AddedNoiseHasUnitConventionVariance) {
  const auto s = DiffusionSchedule::Build(ScheduleKind::kCosine, 50);
  const std::vector<double> h0(100000, 0.0);
  Rng rng(5);
  const auto c = ForwardMarginal(h0, 25, s, rng);
  const double var = oracle::SampleMoments(c.noisy).variance;
  EXPECT_NEAR(var / (1.0 - s.alpha_bar(25)), 1.0, 0.02);
  EXPECT_NEAR(oracle::SampleMoments(c.noise).variance, 1.0, 0.02);
}

class FixedOutput : public NoisePredictor {
 public:
  explicit FixedOutput(bool oracle) : oracle_(oracle) {}
  mutable std::vector<double> last_noise;
  Tensor Condition(const ModelInput&, std::size_t, const ForwardContext&) const override {
    return Tensor();
  }
  Tensor Predict(const ModelInput&, const Tensor&, const Tensor& noisy, std::size_t,
                 const ForwardContext&) const override {
    return Tensor::Zeros(noisy.shape());
  }
  bool oracle_;
};

TEST(DiffusionLossTest, ZeroPredictorLossIsMeanAbsoluteNoise) {
  const auto s = DiffusionSchedule::Build(ScheduleKind::kCosine, 50);
  const FixedOutput zero(false);
  const ModelInput unused;
  std::vector<TrainingExample> batch(2000, {&unused, std::vector<double>(10, 0.3)});
  Rng rng(4);
  const double loss = DiffusionLoss(zero, batch, s, {}, rng, {}).item();
  EXPECT_NEAR(loss, kUnitLaplaceScale, 0.01);
  // The same draws in a permuted batch give the same mean.
  std::vector<TrainingExample> empty;
  EXPECT_THROW(DiffusionLoss(zero, empty, s, {}, rng, {}), std::invalid_argument);
}

TEST(DiffusionLossTest, OracleNoiseGivesZeroLoss) {
  const auto s = DiffusionSchedule::Build(ScheduleKind::kCosine, 50);
  const std::vector<double> h0 = {0.2, -0.4, 1.0};
  const fixture::CheatingPredictor oracle(h0, s);
  const ModelInput unused;
  const std::vector<TrainingExample> batch(20, {&unused, h0});
  Rng rng(6);
  EXPECT_NEAR(DiffusionLoss(oracle, batch, s, {}, rng, {}).item(), 0.0, 1e-9);
}

TEST(LossTest, HuberBranches) {
  const auto t = Tensor::Zeros({1, 1});
  const LossConfig h1{LossKind::kHuber, 1.0};
  EXPECT_DOUBLE_EQ(NoiseLoss(Tensor::FromData({1, 1}, {2.0}), t, h1).item(), 1.5);
  EXPECT_DOUBLE_EQ(NoiseLoss(Tensor::FromData({1, 1}, {2.0}), t, {}).item(), 2.0);
  EXPECT_DOUBLE_EQ(NoiseLoss(Tensor::FromData({1, 1}, {1.0}), t, h1).item(), 0.5);
  EXPECT_DOUBLE_EQ(NoiseLoss(t, t, h1).item(), 0.0);
}

TEST(CheatingDenoiserTest, AllStepCounts) {
  for (std::size_t steps : {100u, 200u}) {
    const auto s = DiffusionSchedule::Build(ScheduleKind::kCosine, steps);
    EXPECT_LT(fixture::CheatingRoundTripRmse(s, 20, 10, 3), 0.05);
  }
}

}  // namespace
}  // namespace hrdiff
