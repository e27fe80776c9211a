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
#include <cmath>
#include <random>

#include <json.hpp>

#include "irstd/error.hpp"
#include "irstd/metrics.hpp"
#include "test_support.hpp"

namespace irstd {
namespace {

using testing::random_mask;

// Independent brute-force evaluation: BFS labelling, explicit centroids.
struct OracleBlob {
  double cx, cy;
  std::int64_t area;
};

std::vector<OracleBlob> oracle_blobs(const BinaryMask& m) {
  const int w = m.width(), h = m.height();
  std::vector<int> seen(m.size(), 0);
  std::vector<OracleBlob> out;
  for (int y0 = 0; y0 < h; ++y0)
    for (int x0 = 0; x0 < w; ++x0) {
      if (!m(x0, y0) || seen[static_cast<std::size_t>(y0) * w + x0]) continue;
      std::vector<std::pair<int, int>> queue{{x0, y0}};
      seen[static_cast<std::size_t>(y0) * w + x0] = 1;
      double sx = 0, sy = 0;
      for (std::size_t q = 0; q < queue.size(); ++q) {
        const auto [x, y] = queue[q];
        sx += x;
        sy += y;
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const int xx = x + dx, yy = y + dy;
            if (xx < 0 || yy < 0 || xx >= w || yy >= h || !m(xx, yy)) continue;
            auto& s = seen[static_cast<std::size_t>(yy) * w + xx];
            if (!s) {
              s = 1;
              queue.emplace_back(xx, yy);
            }
          }
      }
      const auto n = static_cast<double>(queue.size());
      out.push_back({sx / n, sy / n, static_cast<std::int64_t>(queue.size())});
    }
  return out;
}

struct OracleImage {
  std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
  std::int64_t gt = 0, detected = 0, fa_pixels = 0, pixels = 0;
  std::vector<bool> pred_matched;
};

OracleImage oracle_image(const BinaryMask& pred, const BinaryMask& gt, double dist) {
  OracleImage o;
  for (int y = 0; y < pred.height(); ++y)
    for (int x = 0; x < pred.width(); ++x) {
      const bool p = pred(x, y), g = gt(x, y);
      o.tp += p && g;
      o.fp += p && !g;
      o.fn += !p && g;
      o.tn += !p && !g;
    }
  const auto pb = oracle_blobs(pred);
  const auto gb = oracle_blobs(gt);
  o.pred_matched.assign(pb.size(), false);
  o.gt = static_cast<std::int64_t>(gb.size());
  o.pixels = static_cast<std::int64_t>(pred.size());
  for (const auto& g : gb) {
    bool hit = false;
    for (std::size_t i = 0; i < pb.size(); ++i) {
      if (std::hypot(pb[i].cx - g.cx, pb[i].cy - g.cy) < dist) {
        hit = true;
        o.pred_matched[i] = true;
      }
    }
    o.detected += hit;
  }
  for (std::size_t i = 0; i < pb.size(); ++i)
    if (!o.pred_matched[i]) o.fa_pixels += pb[i].area;
  return o;
}

TEST(Score, PublishedRows) {
  EXPECT_NEAR(score(44.45, 72.17), 58.31, 0.01);
  EXPECT_NEAR(score(46.10, 62.28), 54.19, 0.01);
  EXPECT_EQ(score(0, 0), 0.0);
  EXPECT_THROW(score(101, 0), RangeError);
  EXPECT_THROW(score(50, -1), RangeError);
}

TEST(Score, MonotoneInBothArguments) {
  for (double a = 0; a <= 100; a += 12.5)
    for (double b = 0; b <= 100; b += 12.5) {
      if (a + 12.5 <= 100) {
        EXPECT_LE(score(a, b), score(a + 12.5, b));
      }
      if (b + 12.5 <= 100) {
        EXPECT_LE(score(a, b), score(a, b + 12.5));
      }
    }
}

TEST(Confusion, Examples) {
  BinaryMask gt(10, 10);
  for (int i = 0; i < 10; ++i) gt(i, 3) = 1;
  EXPECT_EQ(pixel_confusion(gt, gt), (PixelConfusion{10, 0, 0, 90}));
  BinaryMask five(10, 10);
  for (int i = 0; i < 5; ++i) five(i, 0) = 1;
  EXPECT_EQ(pixel_confusion(BinaryMask(10, 10), five).fn, 5);
  EXPECT_THROW(pixel_confusion(BinaryMask(2, 2), BinaryMask(3, 2)), DimensionError);
}

TEST(DatasetIou, Examples) {
  const std::vector<PixelConfusion> c{{2, 1, 0, 10}, {1, 0, 2, 10}};
  EXPECT_DOUBLE_EQ(dataset_iou(c), 50.0);
  const std::vector<PixelConfusion> perfect{{4, 0, 0, 5}, {1, 0, 0, 0}};
  EXPECT_DOUBLE_EQ(dataset_iou(perfect), 100.0);
  const std::vector<PixelConfusion> empty_images{{0, 0, 0, 9}};
  EXPECT_DOUBLE_EQ(dataset_iou(empty_images), 0.0);
  EXPECT_THROW(dataset_iou({}), ParameterError);
}

TEST(DatasetNiou, Examples) {
  EXPECT_DOUBLE_EQ(dataset_niou(std::vector<double>{0.5, 1.0}), 75.0);
  EXPECT_DOUBLE_EQ(dataset_niou(std::vector<double>{0.3}), 30.0);
  EXPECT_DOUBLE_EQ((PixelConfusion{0, 0, 0, 7}).iou(), 1.0);
  EXPECT_THROW(dataset_niou({}), ParameterError);
}

TEST(Match, Examples) {
  BinaryMask gt(10, 10), pred(10, 10);
  gt(4, 4) = gt(5, 4) = gt(4, 5) = gt(5, 5) = 1;
  pred(5, 5) = 1;
  auto m = match_targets(connected_components(pred), connected_components(gt));
  EXPECT_EQ(m.detected_gt, 1);
  EXPECT_EQ(m.matched_pred_ids, std::vector<int>{1});

  BinaryMask far(20, 20), g2(20, 20);
  g2(2, 2) = 1;
  far(12, 2) = 1;
  m = match_targets(connected_components(far), connected_components(g2));
  EXPECT_EQ(m.detected_gt, 0);
  EXPECT_TRUE(m.matched_pred_ids.empty());

  EXPECT_EQ(match_targets(connected_components(BinaryMask(10, 10)), connected_components(gt)).detected_gt, 0);
  MatchParams bad;
  bad.alpha = 0.4;
  EXPECT_THROW(match_targets(connected_components(pred), connected_components(gt), bad), ParameterError);
}

TEST(PdFa, Examples) {
  BinaryMask gt(256, 256), pred(256, 256);
  gt(10, 10) = 1;
  pred(10, 10) = 1;
  auto s = target_stats(connected_components(pred), connected_components(gt));
  PdFa r = dataset_pd_fa(std::span<const TargetStats>(&s, 1));
  EXPECT_EQ(r.pd, 100.0);
  EXPECT_EQ(r.fa, 0.0);

  pred(200, 200) = 1;
  s = target_stats(connected_components(pred), connected_components(gt));
  r = dataset_pd_fa(std::span<const TargetStats>(&s, 1));
  EXPECT_DOUBLE_EQ(r.fa, 1.0 / 65536.0);

  const TargetStats none{0, 0, 0, 100};
  EXPECT_THROW(dataset_pd_fa(std::span<const TargetStats>(&none, 1)), ParameterError);
}

TEST(PdFa, ExtraMatchedComponentChangesNothing) {
  BinaryMask gt(30, 30), pred(30, 30);
  gt(10, 10) = gt(11, 10) = 1;
  pred(10, 10) = 1;
  const auto before = target_stats(connected_components(pred), connected_components(gt));
  pred(12, 12) = 1;  // separate component within 3 px of the GT centroid
  const auto after = target_stats(connected_components(pred), connected_components(gt));
  EXPECT_EQ(before.detected_gt, after.detected_gt);
  EXPECT_EQ(before.unmatched_pred_pixels, after.unmatched_pred_pixels);
}

TEST(Metrics, MatchBruteForceOracle) {
  std::mt19937_64 rng(71);
  std::vector<ImageMetrics> per;
  std::vector<OracleImage> oracle;
  for (int i = 0; i < 1000; ++i) {
    const BinaryMask gt = random_mask(rng, 16, 16, 0.04 + 0.02 * (i % 5));
    const BinaryMask pred = random_mask(rng, 16, 16, 0.03 + 0.03 * (i % 4));
    const ImageMetrics m = evaluate_image(pred, gt);
    const OracleImage o = oracle_image(pred, gt, 3.0);
    ASSERT_EQ(m.confusion, (PixelConfusion{o.tp, o.fp, o.fn, o.tn}));
    ASSERT_EQ(m.targets.gt_targets, o.gt);
    ASSERT_EQ(m.targets.detected_gt, o.detected);
    ASSERT_EQ(m.targets.unmatched_pred_pixels, o.fa_pixels);
    const auto tm = match_targets(connected_components(pred), connected_components(gt));
    std::vector<int> want_ids;
    for (std::size_t k = 0; k < o.pred_matched.size(); ++k)
      if (o.pred_matched[k]) want_ids.push_back(static_cast<int>(k) + 1);
    ASSERT_EQ(tm.matched_pred_ids, want_ids);
    per.push_back(m);
    oracle.push_back(o);
  }
  const EvalReport r = summarize(per);
  std::int64_t tp = 0, u = 0, gt = 0, det = 0, fa = 0, px = 0;
  double niou = 0;
  for (const auto& o : oracle) {
    tp += o.tp;
    u += o.tp + o.fp + o.fn;
    gt += o.gt;
    det += o.detected;
    fa += o.fa_pixels;
    px += o.pixels;
    niou += (o.tp + o.fp + o.fn) == 0 ? 1.0 : static_cast<double>(o.tp) / static_cast<double>(o.tp + o.fp + o.fn);
  }
  EXPECT_NEAR(r.iou, 100.0 * tp / u, 1e-12);
  EXPECT_NEAR(r.niou, 100.0 * niou / 1000.0, 1e-12);
  EXPECT_NEAR(r.pd, 100.0 * det / gt, 1e-12);
  EXPECT_NEAR(r.fa, static_cast<double>(fa) / px, 1e-12);
  EXPECT_EQ(r.n_targets, gt);
  EXPECT_EQ(r.valid, r.fa < 1e-4);
}

TEST(Metrics, SummaryIsOrderIndependent) {
  std::mt19937_64 rng(72);
  std::vector<ImageMetrics> per;
  for (int i = 0; i < 50; ++i) per.push_back(evaluate_image(random_mask(rng, 16, 16, 0.1), random_mask(rng, 16, 16, 0.1)));
  const EvalReport a = summarize(per);
  std::shuffle(per.begin(), per.end(), rng);
  EXPECT_EQ(summarize(per), a);
}

TEST(Metrics, PerfectDataset) {
  std::mt19937_64 rng(73);
  std::vector<ImageMetrics> per;
  for (int i = 0; i < 10; ++i) {
    BinaryMask gt = random_mask(rng, 16, 16, 0.05);
    gt(3, 3) = 1;
    per.push_back(evaluate_image(gt, gt));
  }
  const EvalReport r = summarize(per);
  EXPECT_EQ(r.iou, 100.0);
  EXPECT_EQ(r.pd, 100.0);
  EXPECT_EQ(r.fa, 0.0);
  EXPECT_EQ(r.score, 100.0);
  EXPECT_TRUE(r.valid);
}

TEST(Metrics, ReportFormats) {
  EvalReport r;
  r.iou = 50;
  r.pd = 80;
  r.fa = 2.5e-6;
  r.score = 65;
  r.n_images = 2;
  r.valid = true;
  const std::string text = format_report(r);
  EXPECT_NE(text.find("fa_e6=2.5000"), std::string::npos);
  EXPECT_NE(text.find("valid=true"), std::string::npos);
  const auto j = nlohmann::json::parse(report_json(r));
  EXPECT_DOUBLE_EQ(j.at("fa").get<double>(), 2.5e-6);
  EXPECT_EQ(j.at("n_images").get<int>(), 2);
}

}  // namespace
}  // namespace irstd
