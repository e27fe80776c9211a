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

#include "irstd/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <json.hpp>

namespace irstd {

double PixelConfusion::iou() const noexcept {
  const std::int64_t u = tp + fp + fn;
  return u == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(u);
}

void MatchParams::validate() const {
  if (!(match_dist > 0.0)) throw ParameterError("match_dist must be > 0");
  if (alpha != 0.5) throw ParameterError("score alpha is fixed at 0.5");
}

PixelConfusion pixel_confusion(const BinaryMask& pred, const BinaryMask& gt) {
  require_same_shape(pred, gt, "pixel_confusion");
  PixelConfusion c;
  const auto p = pred.data();
  const auto g = gt.data();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] && g[i]) {
      ++c.tp;
    } else if (p[i]) {
      ++c.fp;
    } else if (g[i]) {
      ++c.fn;
    } else {
      ++c.tn;
    }
  }
  return c;
}

double dataset_iou(std::span<const PixelConfusion> confusions) {
  if (confusions.empty()) throw ParameterError("dataset_iou: empty dataset");
  std::int64_t tp = 0, u = 0;
  for (const auto& c : confusions) {
    tp += c.tp;
    u += c.tp + c.fp + c.fn;
  }
  return u == 0 ? 0.0 : 100.0 * static_cast<double>(tp) / static_cast<double>(u);
}

double dataset_niou(std::span<const double> per_image_iou) {
  if (per_image_iou.empty()) throw ParameterError("dataset_niou: empty dataset");
  std::vector<double> v(per_image_iou.begin(), per_image_iou.end());
  std::sort(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += x;
  return 100.0 * s / static_cast<double>(v.size());
}

TargetMatch match_targets(const ComponentSet& pred, const ComponentSet& gt, const MatchParams& params) {
  params.validate();
  const double limit2 = params.match_dist * params.match_dist;
  TargetMatch m;
  std::vector<char> matched(pred.size(), 0);
  for (const auto& g : gt.components) {
    bool hit = false;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      const auto& p = pred.components[i];
      const double dx = p.centroid_x() - g.centroid_x();
      const double dy = p.centroid_y() - g.centroid_y();
      if (dx * dx + dy * dy < limit2) {
        hit = true;
        matched[i] = 1;
      }
    }
    if (hit) ++m.detected_gt;
  }
  for (std::size_t i = 0; i < matched.size(); ++i) {
    if (matched[i]) m.matched_pred_ids.push_back(pred.components[i].id);
  }
  return m;
}

TargetStats target_stats(const ComponentSet& pred, const ComponentSet& gt, const MatchParams& params) {
  if (pred.width != gt.width || pred.height != gt.height) throw DimensionError("target_stats: size mismatch");
  const TargetMatch m = match_targets(pred, gt, params);
  TargetStats s;
  s.gt_targets = static_cast<std::int64_t>(gt.size());
  s.detected_gt = m.detected_gt;
  s.total_pixels = static_cast<std::int64_t>(pred.width) * pred.height;
  std::size_t j = 0;
  for (const auto& c : pred.components) {
    while (j < m.matched_pred_ids.size() && m.matched_pred_ids[j] < c.id) ++j;
    const bool matched = j < m.matched_pred_ids.size() && m.matched_pred_ids[j] == c.id;
    if (!matched) s.unmatched_pred_pixels += c.area;
  }
  return s;
}

PdFa dataset_pd_fa(std::span<const TargetStats> per_image) {
  std::int64_t gt = 0, det = 0, fa_px = 0, px = 0;
  for (const auto& s : per_image) {
    gt += s.gt_targets;
    det += s.detected_gt;
    fa_px += s.unmatched_pred_pixels;
    px += s.total_pixels;
  }
  if (gt == 0) throw ParameterError("dataset_pd_fa: dataset has no ground-truth targets, Pd undefined");
  return {100.0 * static_cast<double>(det) / static_cast<double>(gt),
          px == 0 ? 0.0 : static_cast<double>(fa_px) / static_cast<double>(px)};
}

double score(double iou, double pd) {
  if (!(iou >= 0.0 && iou <= 100.0) || !(pd >= 0.0 && pd <= 100.0)) {
    throw RangeError("score: inputs must be percentages in [0, 100]");
  }
  constexpr double alpha = 0.5;
  return alpha * iou + (1.0 - alpha) * pd;
}

ImageMetrics evaluate_image(const BinaryMask& pred, const BinaryMask& gt, const MatchParams& params) {
  ImageMetrics m;
  m.confusion = pixel_confusion(pred, gt);
  m.iou = m.confusion.iou();
  m.targets = target_stats(connected_components(pred, 8), connected_components(gt, 8), params);
  return m;
}

EvalReport summarize(std::span<const ImageMetrics> images) {
  if (images.empty()) throw ParameterError("summarize: no images");
  std::vector<PixelConfusion> conf;
  std::vector<double> ious;
  std::vector<TargetStats> targets;
  for (const auto& m : images) {
    conf.push_back(m.confusion);
    ious.push_back(m.iou);
    targets.push_back(m.targets);
  }
  EvalReport r;
  r.iou = dataset_iou(conf);
  r.niou = dataset_niou(ious);
  const PdFa pf = dataset_pd_fa(targets);
  r.pd = pf.pd;
  r.fa = pf.fa;
  r.score = score(r.iou, r.pd);
  r.n_images = static_cast<std::int64_t>(images.size());
  for (const auto& t : targets) {
    r.n_targets += t.gt_targets;
    r.n_detected += t.detected_gt;
  }
  r.valid = r.fa < kFaValidityLimit;
  return r;
}

std::string format_report(const EvalReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "iou=%.4f\nniou=%.4f\npd=%.4f\nfa_e6=%.4f\nscore=%.4f\nn_images=%lld\nn_targets=%lld\n"
                "n_detected=%lld\nvalid=%s\n",
                r.iou, r.niou, r.pd, r.fa_e6(), r.score, static_cast<long long>(r.n_images),
                static_cast<long long>(r.n_targets), static_cast<long long>(r.n_detected),
                r.valid ? "true" : "false");
  return buf;
}

std::string report_json(const EvalReport& r) {
  nlohmann::json j{{"iou", r.iou},           {"niou", r.niou},         {"pd", r.pd},
                   {"fa", r.fa},             {"fa_e6", r.fa_e6()},     {"score", r.score},
                   {"n_images", r.n_images}, {"n_targets", r.n_targets}, {"n_detected", r.n_detected},
                   {"valid", r.valid}};
  return j.dump(2);
}

}  // namespace irstd
