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

// Classical single-frame small target detectors. All neighbourhood
// operations replicate the nearest edge pixel outside the image.

#include <span>
#include <vector>

#include "irstd/grid.hpp"

namespace irstd {

struct DetectorParams {
  int tophat_size = 5;
  int maxmed_len = 5;
  std::vector<int> lcm_cell_sizes{3, 5, 7, 9};
  float epsilon = 1e-6f;

  void validate() const;
};

// Square-window grey-level morphology.
SaliencyMap erode(const SaliencyMap& img, int size);
SaliencyMap dilate(const SaliencyMap& img, int size);
/// Box sum over a size x size window, accumulated in double.
std::vector<double> box_sum(const SaliencyMap& img, int size);

/// img - dilate(erode(img)); nonnegative.
SaliencyMap white_tophat(const GrayImage& img, int size);

/// max(img - max of the horizontal, vertical and two diagonal medians, 0).
SaliencyMap max_median(const GrayImage& img, int len);

/// Single-scale local contrast: min over the 8 surrounding s x s cells of
/// L^2 / max(mean_i, eps), L the maximum of the centre cell. Not shifted.
SaliencyMap local_contrast_scale(const SaliencyMap& img, int cell_size, float eps);

/// Max over scales of local_contrast_scale, shifted so the minimum is 0.
SaliencyMap local_contrast(const GrayImage& img, std::span<const int> cell_sizes, float eps = 1e-6f);

/// Min-max rescale to [0,1]; all zeros if the map is constant.
ProbMap normalize_saliency(const SaliencyMap& map);

}  // namespace irstd
