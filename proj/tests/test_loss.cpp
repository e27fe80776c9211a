// Copyright 2026 The irstd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "irstd/error.hpp"
#include "irstd/loss.hpp"
#include "test_support.hpp"

namespace irstd {
namespace {

using testing::random_mask;

double direct_focal(double p, bool pos, double a_pos, double a_neg, double gamma) {
  const double pt = pos ? p : 1 - p;
  return -(pos ? a_pos : a_neg) * std::pow(1 - pt, gamma) * std::log(pt);
}

TEST(Focal, PerfectPredictionIsNearZero) {
  std::mt19937_64 rng(81);
  const BinaryMask t = random_mask(rng, 16, 16, 0.3);
  ProbMap p(16, 16);
  for (std::size_t i = 0; i < p.size(); ++i) p.data()[i] = t.data()[i] ? 1.0f : 0.0f;
  const LossResult r = focal_loss(p, t);
  EXPECT_LT(r.loss, 1e-5);
  EXPECT_GE(r.loss, 0.0);
  for (double g : r.grad) EXPECT_EQ(g, 0.0);  // clamp active everywhere
}

TEST(Focal, ReducesToCrossEntropy) {
  FocalParams ce{1.0, 1.0, 0.0, Reduction::sum};
  const std::vector<double> half{0.5};
  const std::vector<std::uint8_t> pos{1}, neg{0};
  EXPECT_NEAR(focal_loss(half, pos, ce).loss, 0.693147, 1e-6);
  EXPECT_NEAR(focal_loss(half, neg, ce).loss, std::log(2.0), 1e-15);

  std::mt19937_64 rng(82);
  std::uniform_real_distribution<double> u(0.001, 0.999);
  std::vector<double> p(300);
  std::vector<std::uint8_t> t(300);
  double bce = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = u(rng);
    t[i] = (rng() & 1);
    bce += t[i] ? -std::log(p[i]) : -std::log(1 - p[i]);
  }
  EXPECT_NEAR(focal_loss(p, t, ce).loss, bce, 1e-12 * std::max(1.0, bce));
}

TEST(Focal, DirectEvaluation) {
  const std::vector<double> p{0.9};
  const std::vector<std::uint8_t> t{1};
  const double want = 0.25 * 0.01 * -std::log(0.9);
  EXPECT_NEAR(focal_loss(p, t).loss, want, 1e-15);
  EXPECT_NEAR(want, 2.634e-4, 1e-7);

  std::mt19937_64 rng(83);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int i = 0; i < 50; ++i) {
    const std::vector<double> q{u(rng)};
    const std::vector<std::uint8_t> lab{static_cast<std::uint8_t>(rng() & 1)};
    const FocalParams fp{0.3, 0.6, 1.5, Reduction::sum};
    EXPECT_NEAR(focal_loss(q, lab, fp).loss, direct_focal(q[0], lab[0], 0.3, 0.6, 1.5), 1e-14);
  }
}

TEST(Focal, GradientMatchesCentralDifferences) {
  std::mt19937_64 rng(84);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  std::uniform_real_distribution<double> g(0.0, 3.0);
  const double h = 1e-5;
  for (int i = 0; i < 100; ++i) {
    const FocalParams fp{0.25, 0.75, g(rng), Reduction::sum};
    const std::vector<double> p{u(rng)};
    const std::vector<std::uint8_t> t{static_cast<std::uint8_t>(rng() & 1)};
    const double analytic = focal_loss(p, t, fp).grad[0];
    const double up = focal_loss(std::vector<double>{p[0] + h}, t, fp).loss;
    const double dn = focal_loss(std::vector<double>{p[0] - h}, t, fp).loss;
    const double numeric = (up - dn) / (2 * h);
    EXPECT_LT(std::abs(analytic - numeric) / std::max(std::abs(numeric), 1e-8), 1e-4)
        << "p=" << p[0] << " t=" << int{t[0]} << " gamma=" << fp.gamma;
  }
}

TEST(Focal, MeanReduction) {
  std::mt19937_64 rng(85);
  const std::vector<double> p{0.2, 0.7, 0.4, 0.9};
  const std::vector<std::uint8_t> t{0, 1, 1, 0};
  FocalParams s, m;
  m.reduction = Reduction::mean;
  const auto a = focal_loss(p, t, s);
  const auto b = focal_loss(p, t, m);
  EXPECT_NEAR(b.loss, a.loss / 4, 1e-15);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(b.grad[i], a.grad[i] / 4, 1e-15);
  EXPECT_EQ(parse_reduction("mean"), Reduction::mean);
  EXPECT_THROW(parse_reduction("max"), ParameterError);
}

TEST(Focal, ClampBoundary) {
  const std::vector<std::uint8_t> t{1, 0};
  const auto r = focal_loss(std::vector<double>{0.0, 1.0}, t, {1.0, 1.0, 0.0, Reduction::sum});
  EXPECT_NEAR(r.loss, -2 * std::log(kFocalClamp), 1e-9);
  EXPECT_EQ(r.grad[0], 0.0);
  EXPECT_EQ(r.grad[1], 0.0);
  EXPECT_TRUE(std::isfinite(r.loss));
}

TEST(Focal, Errors) {
  EXPECT_THROW(focal_loss(ProbMap(2, 2), BinaryMask(2, 3)), DimensionError);
  FocalParams bad;
  bad.gamma = -1;
  EXPECT_THROW(bad.validate(), ParameterError);
  bad = FocalParams{};
  bad.alpha_pos = 0;
  EXPECT_THROW(bad.validate(), ParameterError);
}

// 2x upsampling with half-pixel centres, written out per output position.
double ref_up2(const StageMap& s, int x, int y) {
  const auto tap = [](int o, int n, int& i0, int& i1, double& w) {
    double src = (o + 0.5) / 2.0 - 0.5;
    src = std::clamp(src, 0.0, n - 1.0);
    i0 = static_cast<int>(src);
    i1 = std::min(i0 + 1, n - 1);
    w = src - i0;
  };
  int x0, x1, y0, y1;
  double wx, wy;
  tap(x, s.width, x0, x1, wx);
  tap(y, s.height, y0, y1, wy);
  const auto v = [&](int xx, int yy) { return s.values[static_cast<std::size_t>(yy) * s.width + xx]; };
  return (1 - wy) * ((1 - wx) * v(x0, y0) + wx * v(x1, y0)) + wy * ((1 - wx) * v(x0, y1) + wx * v(x1, y1));
}

TEST(Upsample, MatchesReferenceBilinear) {
  const StageMap s{2, 2, {0.1, 0.5, 0.3, 0.9}};
  const StageMap up = upsample_bilinear(s, 4, 4);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) EXPECT_NEAR(up.values[static_cast<std::size_t>(y) * 4 + x], ref_up2(s, x, y), 1e-15);
  // Row 0 explicitly: 0.1, 0.75*0.1+0.25*0.5, 0.25*0.1+0.75*0.5, 0.5
  EXPECT_NEAR(up.values[1], 0.2, 1e-15);
  EXPECT_NEAR(up.values[2], 0.4, 1e-15);
  EXPECT_THROW(upsample_bilinear(StageMap{3, 3, std::vector<double>(9)}, 4, 4), DimensionError);
}

TEST(MultiStage, FourEqualStagesAreFourTimesOne) {
  std::mt19937_64 rng(86);
  const BinaryMask t = random_mask(rng, 8, 8, 0.3);
  const ProbMap p = testing::random_grid(rng, 8, 8);
  const StageMap s = StageMap::from(p);
  const double one = focal_loss(p, t).loss;
  EXPECT_EQ(multi_stage_loss(std::array<StageMap, 4>{s, s, s, s}, t), one + one + one + one);
  EXPECT_EQ(multi_stage_loss(std::array<StageMap, 4>{s, s, s, s}, t), 4 * one);
}

TEST(MultiStage, PerfectStagesAreNearZero) {
  std::mt19937_64 rng(87);
  const BinaryMask t = random_mask(rng, 8, 8, 0.3);
  StageMap s{8, 8, std::vector<double>(64)};
  for (std::size_t i = 0; i < 64; ++i) s.values[i] = t.data()[i];
  EXPECT_LT(multi_stage_loss(std::array<StageMap, 4>{s, s, s, s}, t), 4e-5);
}

TEST(MultiStage, HalfResolutionStage) {
  BinaryMask t(4, 4);
  t(1, 1) = t(2, 1) = t(1, 2) = 1;
  const StageMap half{2, 2, {0.5, 0.5, 0.5, 0.5}};
  const StageMap full = upsample_bilinear(half, 4, 4);
  for (double v : full.values) EXPECT_EQ(v, 0.5);
  const double pos = direct_focal(0.5, true, 0.25, 0.75, 2.0);
  const double neg = direct_focal(0.5, false, 0.25, 0.75, 2.0);
  const double want_one = 3 * pos + 13 * neg;
  const StageMap exact{4, 4, std::vector<double>(16, 0.25)};
  const double exact_loss = focal_loss(exact.values, t.data()).loss;
  EXPECT_NEAR(multi_stage_loss(std::array<StageMap, 4>{half, exact, exact, exact}, t), want_one + 3 * exact_loss, 1e-12);

  // Non-constant half-resolution stage against the reference upsampler.
  const StageMap ramp{2, 2, {0.1, 0.6, 0.3, 0.8}};
  double want = 0;
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) want += direct_focal(ref_up2(ramp, x, y), t(x, y), 0.25, 0.75, 2.0);
  EXPECT_NEAR(multi_stage_loss(std::array<StageMap, 4>{ramp, exact, exact, exact}, t), want + 3 * exact_loss, 1e-12);
}

TEST(MultiStage, GradientThroughUpsampling) {
  std::mt19937_64 rng(88);
  const BinaryMask t = random_mask(rng, 8, 8, 0.3);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  std::array<StageMap, 4> st{StageMap{8, 8, {}}, StageMap{4, 4, {}}, StageMap{2, 2, {}}, StageMap{1, 1, {}}};
  for (auto& s : st) {
    s.values.resize(static_cast<std::size_t>(s.width) * s.height);
    for (double& v : s.values) v = u(rng);
  }
  const MultiStageResult r = multi_stage_loss_grad(st, t);
  EXPECT_DOUBLE_EQ(r.loss, multi_stage_loss(st, t));
  const double h = 1e-5;
  for (std::size_t k = 0; k < 4; ++k) {
    ASSERT_EQ(r.grad[k].size(), st[k].values.size());
    for (std::size_t i = 0; i < st[k].values.size(); ++i) {
      auto up = st, dn = st;
      up[k].values[i] += h;
      dn[k].values[i] -= h;
      const double numeric = (multi_stage_loss(up, t) - multi_stage_loss(dn, t)) / (2 * h);
      EXPECT_LT(std::abs(r.grad[k][i] - numeric) / std::max(std::abs(numeric), 1e-8), 1e-4) << k << "/" << i;
    }
  }
}

TEST(MultiStage, Errors) {
  const BinaryMask t(8, 8);
  const StageMap s{8, 8, std::vector<double>(64, 0.5)};
  const std::vector<StageMap> three{s, s, s};
  EXPECT_THROW(multi_stage_loss(std::span<const StageMap>(three), t), ParameterError);
  const std::vector<StageMap> four{s, s, s, s};
  EXPECT_NO_THROW(multi_stage_loss(std::span<const StageMap>(four), t));
  const StageMap odd{3, 3, std::vector<double>(9, 0.5)};
  EXPECT_THROW(multi_stage_loss(std::array<StageMap, 4>{s, s, s, odd}, t), DimensionError);
}

}  // namespace
}  // namespace irstd
