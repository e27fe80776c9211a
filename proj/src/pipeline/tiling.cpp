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

#include "irstd/tiling.hpp"

#include <algorithm>

namespace irstd {

namespace {

std::string dims(int w, int h) { return std::to_string(w) + "x" + std::to_string(h); }

template <class Tag>
void copy_block(const Grid<Tag>& src, int sx, int sy, Grid<Tag>& dst, int dx, int dy, int w, int h) {
  for (int y = 0; y < h; ++y) {
    const auto s = src.row(sy + y).subspan(static_cast<std::size_t>(sx), static_cast<std::size_t>(w));
    std::copy(s.begin(), s.end(), dst.row(dy + y).begin() + dx);
  }
}

}  // namespace

TilePlan plan_tiles(int width, int height, int win) {
  if (width < 1 || height < 1) throw DimensionError("plan_tiles: empty image " + dims(width, height));
  if (win < 1) throw ParameterError("plan_tiles: win must be >= 1");
  TilePlan p;
  p.orig_w = width;
  p.orig_h = height;
  p.win = win;
  p.padded_w = win * ((width + win - 1) / win);
  p.padded_h = win * ((height + win - 1) / win);
  for (int y0 = 0; y0 < p.padded_h; y0 += win) {
    for (int x0 = 0; x0 < p.padded_w; x0 += win) p.tiles.push_back({x0, y0});
  }
  return p;
}

GrayImage pad_black(const GrayImage& img, const TilePlan& plan) {
  if (!img.same_shape(plan.orig_w, plan.orig_h)) {
    throw DimensionError("pad_black: image " + dims(img.width(), img.height()) + " does not match plan " +
                         dims(plan.orig_w, plan.orig_h));
  }
  GrayImage out(plan.padded_w, plan.padded_h);
  copy_block(img, 0, 0, out, 0, 0, img.width(), img.height());
  return out;
}

std::vector<GrayImage> extract_tiles(const GrayImage& padded, const TilePlan& plan) {
  if (!padded.same_shape(plan.padded_w, plan.padded_h)) {
    throw DimensionError("extract_tiles: image " + dims(padded.width(), padded.height()) +
                         " does not match padded plan " + dims(plan.padded_w, plan.padded_h));
  }
  std::vector<GrayImage> out;
  out.reserve(plan.tiles.size());
  for (const auto& t : plan.tiles) {
    GrayImage tile(plan.win, plan.win);
    copy_block(padded, t.x0, t.y0, tile, 0, 0, plan.win, plan.win);
    out.push_back(std::move(tile));
  }
  return out;
}

ProbMap stitch(const std::vector<ProbMap>& tiles, const TilePlan& plan) {
  if (tiles.size() != plan.tiles.size()) {
    throw DimensionError("stitch: " + std::to_string(tiles.size()) + " tiles for a plan of " +
                         std::to_string(plan.tiles.size()));
  }
  ProbMap out(plan.padded_w, plan.padded_h);
  for (std::size_t k = 0; k < tiles.size(); ++k) {
    if (!tiles[k].same_shape(plan.win, plan.win)) {
      throw DimensionError("stitch: tile " + std::to_string(k) + " is " +
                           dims(tiles[k].width(), tiles[k].height()) + ", window is " +
                           dims(plan.win, plan.win));
    }
    copy_block(tiles[k], 0, 0, out, plan.tiles[k].x0, plan.tiles[k].y0, plan.win, plan.win);
  }
  return out;
}

ProbMap crop_valid(const ProbMap& map, const TilePlan& plan) {
  if (!map.same_shape(plan.padded_w, plan.padded_h)) {
    throw DimensionError("crop_valid: map " + dims(map.width(), map.height()) +
                         " does not match padded plan " + dims(plan.padded_w, plan.padded_h));
  }
  ProbMap out(plan.orig_w, plan.orig_h);
  copy_block(map, 0, 0, out, 0, 0, plan.orig_w, plan.orig_h);
  return out;
}

}  // namespace irstd
