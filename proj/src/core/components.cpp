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

#include "irstd/components.hpp"

#include <algorithm>

namespace irstd {

std::int64_t round_half_up_div(std::int64_t num, std::int64_t den) {
  return (2 * num + den) / (2 * den);
}

Point Component::rounded_centroid() const {
  return {static_cast<int>(round_half_up_div(sum_x, area)),
          static_cast<int>(round_half_up_div(sum_y, area))};
}

ComponentSet connected_components(const BinaryMask& mask, int connectivity) {
  if (connectivity != 4 && connectivity != 8) {
    throw ParameterError("connectivity must be 4 or 8, got " + std::to_string(connectivity));
  }
  const int w = mask.width();
  const int h = mask.height();
  ComponentSet out;
  out.width = w;
  out.height = h;
  out.labels.assign(mask.size(), 0);

  static constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  const int nbrs = connectivity;

  std::vector<std::uint32_t> stack;
  const auto px = mask.data();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::uint32_t seed = static_cast<std::uint32_t>(y * w + x);
      if (!px[seed] || out.labels[seed] != 0) continue;

      Component c;
      c.id = static_cast<int>(out.components.size()) + 1;
      c.box = {x, y, x, y};
      out.labels[seed] = c.id;
      stack.assign(1, seed);
      while (!stack.empty()) {
        const std::uint32_t p = stack.back();
        stack.pop_back();
        const int cx = static_cast<int>(p % static_cast<std::uint32_t>(w));
        const int cy = static_cast<int>(p / static_cast<std::uint32_t>(w));
        c.pixels.push_back(p);
        c.sum_x += cx;
        c.sum_y += cy;
        c.box.x0 = std::min(c.box.x0, cx);
        c.box.x1 = std::max(c.box.x1, cx);
        c.box.y0 = std::min(c.box.y0, cy);
        c.box.y1 = std::max(c.box.y1, cy);
        for (int k = 0; k < nbrs; ++k) {
          const int nx = cx + kDx[k];
          const int ny = cy + kDy[k];
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const std::uint32_t q = static_cast<std::uint32_t>(ny * w + nx);
          if (px[q] && out.labels[q] == 0) {
            out.labels[q] = c.id;
            stack.push_back(q);
          }
        }
      }
      c.area = static_cast<std::int64_t>(c.pixels.size());
      std::sort(c.pixels.begin(), c.pixels.end());
      out.components.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace irstd
