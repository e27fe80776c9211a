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

#pragma once

// Pixel-wise focal loss and its four-stage sum for deep-supervision heads.
//
//   FL = sum_i -alpha_t (1 - p_t)^gamma log p_t
//
// with p_t = p for target pixels and 1 - p otherwise. Predictions are
// clamped to [1e-7, 1 - 1e-7] first; the reported gradient is that of the
// clamped loss, so it is zero where the clamp is active.

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "irstd/grid.hpp"

namespace irstd {

inline constexpr double kFocalClamp = 1e-7;

enum class Reduction { sum, mean };

Reduction parse_reduction(std::string_view s);

struct FocalParams {
  double alpha_pos = 0.25;
  double alpha_neg = 0.75;
  double gamma = 2.0;
  Reduction reduction = Reduction::sum;

  void validate() const;
};

struct LossResult {
  double loss = 0.0;
  std::vector<double> grad;  // d loss / d pred, row-major
};

/// Double-precision core; pred and target have equal length.
LossResult focal_loss(std::span<const double> pred, std::span<const std::uint8_t> target, const FocalParams& params = {});

LossResult focal_loss(const ProbMap& pred, const BinaryMask& target, const FocalParams& params = {});

/// A stage map stored in double so training harnesses keep full precision.
struct StageMap {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  static StageMap from(const ProbMap& m);
};

/// Bilinear resize by integer factors, half-pixel centres, edge clamped.
StageMap upsample_bilinear(const StageMap& src, int out_width, int out_height);

struct MultiStageResult {
  double loss = 0.0;
  std::array<std::vector<double>, 4> grad;  // w.r.t. each stage map at its own resolution
};

/// Sum of the four focal losses, each stage upsampled to the target size.
double multi_stage_loss(const std::array<StageMap, 4>& stages, const BinaryMask& target, const FocalParams& params = {});
MultiStageResult multi_stage_loss_grad(const std::array<StageMap, 4>& stages, const BinaryMask& target,
                                       const FocalParams& params = {});

/// Throws unless exactly four stages are given.
double multi_stage_loss(std::span<const StageMap> stages, const BinaryMask& target, const FocalParams& params = {});

}  // namespace irstd
