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

// Fixed-window, non-overlapping tiling. The image sits at the top-left of a
// canvas padded with zeros up to the next multiple of the window.

#include <vector>

#include "irstd/grid.hpp"

namespace irstd {

inline constexpr int kDefaultWindow = 256;

struct TileOrigin {
  int x0 = 0;
  int y0 = 0;
  friend bool operator==(const TileOrigin&, const TileOrigin&) = default;
};

struct TilePlan {
  int orig_w = 0;
  int orig_h = 0;
  int win = kDefaultWindow;
  int padded_w = 0;
  int padded_h = 0;
  std::vector<TileOrigin> tiles;  // row-major

  int cols() const noexcept { return padded_w / win; }
  int rows() const noexcept { return padded_h / win; }
};

TilePlan plan_tiles(int width, int height, int win = kDefaultWindow);

GrayImage pad_black(const GrayImage& img, const TilePlan& plan);

std::vector<GrayImage> extract_tiles(const GrayImage& padded, const TilePlan& plan);

ProbMap stitch(const std::vector<ProbMap>& tiles, const TilePlan& plan);

/// The orig_w x orig_h top-left region of a padded map.
ProbMap crop_valid(const ProbMap& map, const TilePlan& plan);

}  // namespace irstd
