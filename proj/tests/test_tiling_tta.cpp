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

#include <algorithm>
#include <random>
#include <tuple>

#include "irstd/error.hpp"
#include "irstd/tiling.hpp"
#include "irstd/tta.hpp"
#include "test_support.hpp"

namespace irstd {
namespace {

using testing::random_grid;

TEST(Tiling, PlanExamples) {
  const TilePlan a = plan_tiles(256, 256, 256);
  EXPECT_EQ(a.padded_w, 256);
  EXPECT_EQ(a.padded_h, 256);
  EXPECT_EQ(a.tiles, (std::vector<TileOrigin>{{0, 0}}));

  const TilePlan b = plan_tiles(300, 200, 256);
  EXPECT_EQ(b.padded_w, 512);
  EXPECT_EQ(b.padded_h, 256);
  EXPECT_EQ(b.tiles, (std::vector<TileOrigin>{{0, 0}, {256, 0}}));

  EXPECT_EQ(plan_tiles(1024, 1024, 256).tiles.size(), 16u);
  EXPECT_THROW(plan_tiles(0, 5, 256), DimensionError);
  EXPECT_THROW(plan_tiles(5, 5, 0), ParameterError);
}

TEST(Tiling, TilesPartitionTheCanvas) {
  for (auto [w, h, win] : std::vector<std::tuple<int, int, int>>{{257, 255, 256}, {7, 13, 4}, {1, 1, 1}, {100, 3, 7}}) {
    const TilePlan p = plan_tiles(w, h, win);
    EXPECT_EQ(p.padded_w % win, 0);
    EXPECT_EQ(p.padded_h % win, 0);
    EXPECT_EQ(static_cast<int>(p.tiles.size()), p.cols() * p.rows());
    std::vector<int> cover(static_cast<std::size_t>(p.padded_w) * p.padded_h, 0);
    for (const auto& t : p.tiles)
      for (int y = t.y0; y < t.y0 + win; ++y)
        for (int x = t.x0; x < t.x0 + win; ++x) ++cover[static_cast<std::size_t>(y) * p.padded_w + x];
    for (int c : cover) EXPECT_EQ(c, 1);
    // Row-major order.
    for (std::size_t i = 1; i < p.tiles.size(); ++i) {
      const auto& a = p.tiles[i - 1];
      const auto& b = p.tiles[i];
      EXPECT_TRUE(a.y0 < b.y0 || (a.y0 == b.y0 && a.x0 < b.x0));
    }
  }
}

TEST(Tiling, PadBlack) {
  std::mt19937_64 rng(41);
  const auto img = random_grid<GrayImage>(rng, 300, 200);
  const TilePlan p = plan_tiles(300, 200, 256);
  const GrayImage padded = pad_black(img, p);
  ASSERT_EQ(padded.width(), 512);
  ASSERT_EQ(padded.height(), 256);
  for (int y = 0; y < 256; ++y)
    for (int x = 0; x < 512; ++x) EXPECT_EQ(padded(x, y), x < 300 && y < 200 ? img(x, y) : 0.0f);

  const TilePlan exact = plan_tiles(300, 200, 100);
  EXPECT_EQ(pad_black(img, exact), img);
  EXPECT_THROW(pad_black(GrayImage(10, 10), p), DimensionError);
}

TEST(Tiling, ExtractOrderAndStitch) {
  std::mt19937_64 rng(42);
  const auto img = random_grid<GrayImage>(rng, 512, 256);
  const TilePlan p = plan_tiles(512, 256, 256);
  const auto tiles = extract_tiles(img, p);
  ASSERT_EQ(tiles.size(), 2u);
  EXPECT_EQ(tiles[0](0, 0), img(0, 0));
  EXPECT_EQ(tiles[1](0, 0), img(256, 0));
  EXPECT_EQ(tiles[1](255, 255), img(511, 255));

  const ProbMap two = stitch({ProbMap(256, 256, 0.0f), ProbMap(256, 256, 1.0f)}, p);
  EXPECT_EQ(two(255, 10), 0.0f);
  EXPECT_EQ(two(256, 10), 1.0f);

  const TilePlan one = plan_tiles(256, 256, 256);
  const ProbMap single = random_grid(rng, 256, 256);
  EXPECT_EQ(stitch({single}, one), single);
}

TEST(Tiling, StitchExtractPartition) {
  std::mt19937_64 rng(43);
  const auto img = random_grid<GrayImage>(rng, 512, 512);
  const TilePlan p = plan_tiles(512, 512, 256);
  std::vector<ProbMap> maps;
  for (const auto& t : extract_tiles(img, p)) maps.push_back(grid_cast<ProbTag>(t));
  EXPECT_EQ(grid_cast<GrayTag>(stitch(maps, p)), img);
}

TEST(Tiling, StitchAndCropErrors) {
  const TilePlan p = plan_tiles(300, 200, 256);
  EXPECT_THROW(stitch({ProbMap(256, 256)}, p), DimensionError);
  EXPECT_THROW(stitch({ProbMap(256, 256), ProbMap(128, 256)}, p), DimensionError);
  EXPECT_THROW(crop_valid(ProbMap(300, 200), p), DimensionError);
  EXPECT_THROW(extract_tiles(GrayImage(300, 200), p), DimensionError);
}

TEST(Tiling, CropValid) {
  std::mt19937_64 rng(44);
  const TilePlan p = plan_tiles(300, 200, 256);
  const ProbMap big = random_grid(rng, 512, 256);
  const ProbMap c = crop_valid(big, p);
  ASSERT_EQ(c.width(), 300);
  ASSERT_EQ(c.height(), 200);
  EXPECT_EQ(c(299, 199), big(299, 199));

  const auto img = random_grid<GrayImage>(rng, 300, 200);
  EXPECT_EQ(grid_cast<GrayTag>(crop_valid(grid_cast<ProbTag>(pad_black(img, p)), p)), img);
}

TEST(Tiling, FullRoundTripIsIdentity) {
  std::mt19937_64 rng(45);
  for (auto [w, h] : std::vector<std::pair<int, int>>{{256, 256}, {300, 200}, {512, 512}, {1024, 1024}, {257, 255}}) {
    const auto img = random_grid<GrayImage>(rng, w, h);
    const TilePlan p = plan_tiles(w, h, 256);
    std::vector<ProbMap> maps;
    for (const auto& t : extract_tiles(pad_black(img, p), p)) maps.push_back(grid_cast<ProbTag>(t));
    EXPECT_EQ(grid_cast<GrayTag>(crop_valid(stitch(maps, p), p)), img) << w << "x" << h;
  }
}

TEST(Tta, Variants) {
  const GrayImage img(2, 1, {0.2f, 0.7f});
  const auto v = tta_variants(img);
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[0].first, TtaKind::identity);
  EXPECT_EQ(v[1].first, TtaKind::hflip);
  EXPECT_EQ(v[2].first, TtaKind::vflip);
  EXPECT_EQ(v[0].second, img);
  EXPECT_EQ(v[1].second, GrayImage(2, 1, {0.7f, 0.2f}));
  EXPECT_EQ(v[2].second, img);

  const GrayImage sym(3, 3, {0.1f, 0.2f, 0.1f, 0.2f, 0.9f, 0.2f, 0.1f, 0.2f, 0.1f});
  for (const auto& [k, g] : tta_variants(sym)) EXPECT_EQ(g, sym);
}

TEST(Tta, FuseMean) {
  std::mt19937_64 rng(46);
  const ProbMap m = random_grid(rng, 6, 4);
  EXPECT_EQ(tta_fuse({{TtaKind::identity, m}, {TtaKind::hflip, flip_h(m)}, {TtaKind::vflip, flip_v(m)}}), m);

  const ProbMap a(1, 1, {0.0f}), b(1, 1, {0.6f}), c(1, 1, {0.3f});
  const ProbMap f = tta_fuse({{TtaKind::identity, a}, {TtaKind::hflip, b}, {TtaKind::vflip, c}});
  EXPECT_FLOAT_EQ(f(0, 0), 0.3f);

  EXPECT_THROW(tta_fuse({}), ParameterError);
  EXPECT_THROW(tta_fuse({{TtaKind::identity, ProbMap(2, 2)}, {TtaKind::hflip, ProbMap(2, 3)}}), DimensionError);
}

TEST(Tta, FuseUndoesFlipsAndIgnoresOrder) {
  std::mt19937_64 rng(47);
  const ProbMap a = random_grid(rng, 7, 5);
  const ProbMap b = random_grid(rng, 7, 5);
  const ProbMap c = random_grid(rng, 7, 5);
  const std::vector<std::pair<TtaKind, ProbMap>> fwd{{TtaKind::identity, a}, {TtaKind::hflip, b}, {TtaKind::vflip, c}};
  const std::vector<std::pair<TtaKind, ProbMap>> rev{{TtaKind::vflip, c}, {TtaKind::identity, a}, {TtaKind::hflip, b}};
  for (auto r : {FusionReducer::mean, FusionReducer::max, FusionReducer::median}) {
    const ProbMap f = tta_fuse(fwd, r);
    EXPECT_EQ(f, tta_fuse(rev, r));
    const ProbMap bb = flip_h(b), cc = flip_v(c);
    for (int y = 0; y < 5; ++y)
      for (int x = 0; x < 7; ++x) {
        std::vector<float> v{a(x, y), bb(x, y), cc(x, y)};
        std::sort(v.begin(), v.end());
        const float want = r == FusionReducer::mean ? static_cast<float>((double{v[0]} + v[1] + v[2]) / 3.0)
                           : r == FusionReducer::max ? v[2]
                                                     : v[1];
        EXPECT_EQ(f(x, y), want);
        EXPECT_GE(f(x, y), 0.0f);
        EXPECT_LE(f(x, y), 1.0f);
      }
  }
  EXPECT_EQ(parse_reducer("median"), FusionReducer::median);
  EXPECT_THROW(parse_reducer("sum"), ParameterError);
}

}  // namespace
}  // namespace irstd
