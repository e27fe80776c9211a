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

#include <cstdint>
#include <vector>

#include "irstd/grid.hpp"

namespace irstd {

struct BoundingBox {
  int x0 = 0, y0 = 0;  // inclusive
  int x1 = 0, y1 = 0;  // inclusive
};

struct Component {
  int id = 0;  // 1-based
  std::int64_t area = 0;
  std::int64_t sum_x = 0;
  std::int64_t sum_y = 0;
  BoundingBox box;
  std::vector<std::uint32_t> pixels;  // row-major indices, ascending

  double centroid_x() const { return static_cast<double>(sum_x) / static_cast<double>(area); }
  double centroid_y() const { return static_cast<double>(sum_y) / static_cast<double>(area); }
  /// Centroid rounded to the nearest pixel, ties rounding up.
  Point rounded_centroid() const;
};

/// Labeled connected regions of a mask. Labels are dense 1..K in order of
/// the first pixel met by a row-major scan; 0 is background.
struct ComponentSet {
  int width = 0;
  int height = 0;
  std::vector<int> labels;
  std::vector<Component> components;

  std::size_t size() const noexcept { return components.size(); }
  int label(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
};

/// Round-half-up of num/den for num >= 0, den > 0, in exact integer arithmetic.
std::int64_t round_half_up_div(std::int64_t num, std::int64_t den);

/// connectivity must be 4 or 8.
ComponentSet connected_components(const BinaryMask& mask, int connectivity = 8);

}  // namespace irstd
