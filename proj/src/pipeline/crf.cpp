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

#include "irstd/crf.hpp"

#include <algorithm>
#include <cmath>

#include "irstd/simd/kernels.hpp"

namespace irstd {

namespace {

constexpr float kQMin = 0x1p-24f;
constexpr float kQMax = 1.0f - 0x1p-24f;

// Accumulates, for every pixel i, S_i = sum_j k(i,j) Q_j(1) and
// K_i = sum_j k(i,j). Each unordered pair is visited once through a
// half-plane of offsets and credited to both ends.
void pairwise_sums(const GrayImage& guide, const std::vector<float>& q, const CrfParams& p, int radius,
                   std::vector<float>& s, std::vector<float>& k) {
  const int w = guide.width();
  const int h = guide.height();
  std::fill(s.begin(), s.end(), 0.0f);
  std::fill(k.begin(), k.end(), 0.0f);
  const auto& kern = simd::active();
  const float* g = guide.data().data();

  const double two_gamma_sq = 2.0 * double{p.theta_gamma} * p.theta_gamma;
  const double two_alpha_sq = 2.0 * double{p.theta_alpha} * p.theta_alpha;
  const float inv_two_beta_sq = static_cast<float>(1.0 / (2.0 * double{p.theta_beta} * p.theta_beta));
  const int ry = std::min(radius, h - 1);
  const int rx = std::min(radius, w - 1);

  struct Offset {
    int dx, dy;
    simd::CrfPairRow row;
  };
  std::vector<Offset> offsets;
  for (int dy = 0; dy <= ry; ++dy) {
    for (int dx = dy == 0 ? 1 : -rx; dx <= rx; ++dx) {
      const double d2 = static_cast<double>(dx) * dx + static_cast<double>(dy) * dy;
      simd::CrfPairRow row{};
      const double smooth = p.w_smooth * std::exp(-d2 / two_gamma_sq);
      row.smooth = smooth < 1e-30 ? 0.0f : static_cast<float>(smooth);
      row.app_weight = p.w_app;
      row.app_spatial = static_cast<float>(d2 / two_alpha_sq);
      row.inv_two_beta_sq = inv_two_beta_sq;
      const int x_begin = std::max(0, -dx);
      const int x_end = std::min(w, w - dx);
      if (x_end <= x_begin) continue;
      row.n = static_cast<std::size_t>(x_end - x_begin);
      offsets.push_back({dx, dy, row});
    }
  }

  // Row blocks keep the touched rows (block + radius) cache resident
  // across all offsets.
  constexpr int kBlockRows = 8;
  for (int y0 = 0; y0 < h; y0 += kBlockRows) {
    const int y1 = std::min(h, y0 + kBlockRows);
    for (auto& [dx, dy, row] : offsets) {
      const int x_begin = std::max(0, -dx);
      for (int y = y0; y < y1 && y + dy < h; ++y) {
        const std::size_t a = static_cast<std::size_t>(y) * w + x_begin;
        const std::size_t b = static_cast<std::size_t>(y + dy) * w + x_begin + dx;
        row.guide_a = g + a;
        row.guide_b = g + b;
        row.q_a = q.data() + a;
        row.q_b = q.data() + b;
        row.s_a = s.data() + a;
        row.s_b = s.data() + b;
        row.k_a = k.data() + a;
        row.k_b = k.data() + b;
        kern.crf_pair_row(row);
      }
    }
  }
}

std::vector<float> clamp_unary(const ProbMap& prob, float eps) {
  std::vector<float> out(prob.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::clamp(prob.data()[i], eps, 1.0f - eps);
  return out;
}

}  // namespace

int CrfParams::effective_radius() const {
  if (radius) return *radius;
  return static_cast<int>(std::ceil(3.0 * std::max(double{theta_alpha}, double{theta_gamma})));
}

void CrfParams::validate() const {
  if (!(theta_gamma > 0.0f) || !(theta_alpha > 0.0f) || !(theta_beta > 0.0f)) {
    throw ParameterError("crf: bandwidths must be > 0");
  }
  if (!(w_smooth >= 0.0f) || !(w_app >= 0.0f)) throw ParameterError("crf: weights must be >= 0");
  if (iters < 0) throw ParameterError("crf: iters must be >= 0");
  if (effective_radius() < 1) throw ParameterError("crf: radius must be >= 1");
  if (!(clamp_eps >= kQMin) || !(clamp_eps < 0.5f)) throw ParameterError("crf: clamp_eps must be in [2^-24, 0.5)");
}

double kernel_weight(Point i, Point j, double intensity_i, double intensity_j, const CrfParams& p) {
  const double dx = static_cast<double>(i.x) - j.x;
  const double dy = static_cast<double>(i.y) - j.y;
  const double d2 = dx * dx + dy * dy;
  const double di = intensity_i - intensity_j;
  const double g2 = 2.0 * double{p.theta_gamma} * p.theta_gamma;
  const double a2 = 2.0 * double{p.theta_alpha} * p.theta_alpha;
  const double b2 = 2.0 * double{p.theta_beta} * p.theta_beta;
  return p.w_smooth * std::exp(-d2 / g2) + p.w_app * std::exp(-d2 / a2 - di * di / b2);
}

std::vector<ProbMap> crf_refine_trace(const ProbMap& prob, const GrayImage& guide, const CrfParams& params) {
  params.validate();
  require_same_shape(prob, guide, "crf_refine: prob vs guide");
  const int w = prob.width();
  const int h = prob.height();
  const int radius = params.effective_radius();

  const std::vector<float> unary = clamp_unary(prob, params.clamp_eps);
  std::vector<float> q = unary;
  std::vector<ProbMap> trace;
  trace.emplace_back(w, h, q);

  const bool coupled = params.w_smooth > 0.0f || params.w_app > 0.0f;
  std::vector<float> s(q.size()), k(q.size());
  for (int it = 0; it < params.iters; ++it) {
    if (coupled) {
      pairwise_sums(guide, q, params, radius, s, k);
    } else {
      std::fill(s.begin(), s.end(), 0.0f);
      std::fill(k.begin(), k.end(), 0.0f);
    }
    for (std::size_t i = 0; i < q.size(); ++i) {
      // Messages: label 1 pays for neighbours in 0, label 0 for neighbours in 1.
      const double m0 = s[i];
      const double m1 = static_cast<double>(k[i]) - s[i];
      const double shift = std::min(m0, m1);
      const double p1 = unary[i];
      const double a = p1 * std::exp(-(m1 - shift));
      const double b = (1.0 - p1) * std::exp(-(m0 - shift));
      q[i] = std::clamp(static_cast<float>(a / (a + b)), kQMin, kQMax);
    }
    trace.emplace_back(w, h, q);
  }
  return trace;
}

ProbMap crf_refine(const ProbMap& prob, const GrayImage& guide, const CrfParams& params) {
  auto trace = crf_refine_trace(prob, guide, params);
  return std::move(trace.back());
}

}  // namespace irstd
