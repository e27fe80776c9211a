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

#include "irstd/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace irstd {

namespace {

// One output coordinate's two source taps along an axis.
struct Tap {
  int i0;
  int i1;
  double w1;  // weight of i1; i0 gets 1 - w1
};

std::vector<Tap> axis_taps(int in, int out) {
  std::vector<Tap> taps(static_cast<std::size_t>(out));
  const double scale = static_cast<double>(in) / static_cast<double>(out);
  for (int o = 0; o < out; ++o) {
    double s = (o + 0.5) * scale - 0.5;
    s = std::clamp(s, 0.0, static_cast<double>(in - 1));
    const int i0 = static_cast<int>(std::floor(s));
    const int i1 = std::min(i0 + 1, in - 1);
    taps[static_cast<std::size_t>(o)] = {i0, i1, s - i0};
  }
  return taps;
}

void check_stage_dims(const StageMap& s, int tw, int th) {
  if (s.width <= 0 || s.height <= 0 || s.values.size() != static_cast<std::size_t>(s.width) * s.height) {
    throw DimensionError("stage map: inconsistent dimensions");
  }
  if (tw % s.width != 0 || th % s.height != 0) {
    throw DimensionError("stage map " + std::to_string(s.width) + "x" + std::to_string(s.height) +
                         " does not divide target " + std::to_string(tw) + "x" + std::to_string(th));
  }
}

// Adjoint of upsample_bilinear: scatters output gradients back to the source.
std::vector<double> upsample_adjoint(const StageMap& src, int out_w, int out_h, std::span<const double> g) {
  const auto tx = axis_taps(src.width, out_w);
  const auto ty = axis_taps(src.height, out_h);
  std::vector<double> out(src.values.size(), 0.0);
  for (int y = 0; y < out_h; ++y) {
    const Tap& a = ty[static_cast<std::size_t>(y)];
    for (int x = 0; x < out_w; ++x) {
      const Tap& b = tx[static_cast<std::size_t>(x)];
      const double v = g[static_cast<std::size_t>(y) * out_w + x];
      const auto at = [&](int yy, int xx) -> double& { return out[static_cast<std::size_t>(yy) * src.width + xx]; };
      at(a.i0, b.i0) += v * (1 - a.w1) * (1 - b.w1);
      at(a.i0, b.i1) += v * (1 - a.w1) * b.w1;
      at(a.i1, b.i0) += v * a.w1 * (1 - b.w1);
      at(a.i1, b.i1) += v * a.w1 * b.w1;
    }
  }
  return out;
}

}  // namespace

Reduction parse_reduction(std::string_view s) {
  if (s == "sum") return Reduction::sum;
  if (s == "mean") return Reduction::mean;
  throw ParameterError("unknown reduction '" + std::string(s) + "'");
}

void FocalParams::validate() const {
  if (!(alpha_pos > 0.0 && alpha_pos <= 1.0) || !(alpha_neg > 0.0 && alpha_neg <= 1.0)) {
    throw ParameterError("focal alpha must be in (0, 1]");
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ParameterError("focal gamma must be >= 0");
}

LossResult focal_loss(std::span<const double> pred, std::span<const std::uint8_t> target, const FocalParams& params) {
  params.validate();
  if (pred.size() != target.size()) throw DimensionError("focal_loss: pred and target differ in size");
  LossResult r;
  r.grad.resize(pred.size());
  const double g = params.gamma;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double raw = pred[i];
    if (!std::isfinite(raw)) throw RangeError("focal_loss: non-finite prediction");
    const double p = std::clamp(raw, kFocalClamp, 1.0 - kFocalClamp);
    const bool pos = target[i] != 0;
    const double pt = pos ? p : 1.0 - p;
    const double a = pos ? params.alpha_pos : params.alpha_neg;
    const double q = 1.0 - pt;
    const double lg = std::log(pt);
    r.loss += -a * std::pow(q, g) * lg;

    // d/dpt of -a q^g log pt = a (g q^(g-1) log pt - q^g / pt)
    double d = -std::pow(q, g) / pt;
    if (g != 0.0) d += g * std::pow(q, g - 1.0) * lg;
    d *= a;
    if (!pos) d = -d;
    const bool clamped = raw < kFocalClamp || raw > 1.0 - kFocalClamp;
    r.grad[i] = clamped ? 0.0 : d;
  }
  if (params.reduction == Reduction::mean && !pred.empty()) {
    const double n = static_cast<double>(pred.size());
    r.loss /= n;
    for (double& v : r.grad) v /= n;
  }
  return r;
}

LossResult focal_loss(const ProbMap& pred, const BinaryMask& target, const FocalParams& params) {
  require_same_shape(pred, target, "focal_loss");
  const std::vector<double> p(pred.data().begin(), pred.data().end());
  return focal_loss(std::span<const double>(p), target.data(), params);
}

StageMap StageMap::from(const ProbMap& m) {
  return {m.width(), m.height(), std::vector<double>(m.data().begin(), m.data().end())};
}

StageMap upsample_bilinear(const StageMap& src, int out_width, int out_height) {
  check_stage_dims(src, out_width, out_height);
  if (src.width == out_width && src.height == out_height) return src;
  const auto tx = axis_taps(src.width, out_width);
  const auto ty = axis_taps(src.height, out_height);
  StageMap out{out_width, out_height, std::vector<double>(static_cast<std::size_t>(out_width) * out_height)};
  const auto at = [&](int y, int x) { return src.values[static_cast<std::size_t>(y) * src.width + x]; };
  for (int y = 0; y < out_height; ++y) {
    const Tap& a = ty[static_cast<std::size_t>(y)];
    for (int x = 0; x < out_width; ++x) {
      const Tap& b = tx[static_cast<std::size_t>(x)];
      const double top = at(a.i0, b.i0) * (1 - b.w1) + at(a.i0, b.i1) * b.w1;
      const double bot = at(a.i1, b.i0) * (1 - b.w1) + at(a.i1, b.i1) * b.w1;
      out.values[static_cast<std::size_t>(y) * out_width + x] = top * (1 - a.w1) + bot * a.w1;
    }
  }
  return out;
}

MultiStageResult multi_stage_loss_grad(const std::array<StageMap, 4>& stages, const BinaryMask& target,
                                       const FocalParams& params) {
  MultiStageResult r;
  for (std::size_t k = 0; k < stages.size(); ++k) {
    const StageMap up = upsample_bilinear(stages[k], target.width(), target.height());
    const LossResult fl = focal_loss(std::span<const double>(up.values), target.data(), params);
    r.loss += fl.loss;
    if (stages[k].width == target.width() && stages[k].height == target.height()) {
      r.grad[k] = fl.grad;
    } else {
      r.grad[k] = upsample_adjoint(stages[k], target.width(), target.height(), fl.grad);
    }
  }
  return r;
}

double multi_stage_loss(const std::array<StageMap, 4>& stages, const BinaryMask& target, const FocalParams& params) {
  double total = 0.0;
  for (const auto& s : stages) {
    const StageMap up = upsample_bilinear(s, target.width(), target.height());
    total += focal_loss(std::span<const double>(up.values), target.data(), params).loss;
  }
  return total;
}

double multi_stage_loss(std::span<const StageMap> stages, const BinaryMask& target, const FocalParams& params) {
  if (stages.size() != 4) {
    throw ParameterError("multi_stage_loss: expected 4 stages, got " + std::to_string(stages.size()));
  }
  return multi_stage_loss(std::array<StageMap, 4>{stages[0], stages[1], stages[2], stages[3]}, target, params);
}

}  // namespace irstd
