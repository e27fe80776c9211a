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

// Pixel-level IoU / nIoU, target-level Pd / Fa and the composite score.
//
//   IoU   = 100 * sum TP / sum (TP + FP + FN)      over the dataset
//   nIoU  = 100 * mean of per-image TP / (TP + FP + FN), 1 for empty/empty
//   Pd    = 100 * detected GT targets / GT targets
//   Fa    = pixels of unmatched predicted components / all pixels
//   Score = 0.5 * IoU + 0.5 * Pd, valid only when Fa < 1e-4
//
// A GT target is detected when a predicted component centroid lies closer
// than match_dist to its centroid. Components are 8-connected.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "irstd/components.hpp"
#include "irstd/grid.hpp"

namespace irstd {

inline constexpr double kFaValidityLimit = 1e-4;

struct PixelConfusion {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;

  std::int64_t total() const noexcept { return tp + fp + fn + tn; }
  /// Per-image IoU fraction; 1 when prediction and truth are both empty.
  double iou() const noexcept;
  friend bool operator==(const PixelConfusion&, const PixelConfusion&) = default;
};

struct MatchParams {
  double match_dist = 3.0;
  double alpha = 0.5;

  void validate() const;
};

struct TargetMatch {
  std::int64_t detected_gt = 0;
  std::vector<int> matched_pred_ids;  // ascending component ids
};

/// Target-level counts for one image.
struct TargetStats {
  std::int64_t gt_targets = 0;
  std::int64_t detected_gt = 0;
  std::int64_t unmatched_pred_pixels = 0;
  std::int64_t total_pixels = 0;
};

struct PdFa {
  double pd = 0.0;  // percent
  double fa = 0.0;  // rate
};

struct ImageMetrics {
  PixelConfusion confusion;
  double iou = 0.0;  // fraction
  TargetStats targets;
};

struct EvalReport {
  double iou = 0.0;
  double niou = 0.0;
  double pd = 0.0;
  double fa = 0.0;
  double score = 0.0;
  std::int64_t n_images = 0;
  std::int64_t n_targets = 0;
  std::int64_t n_detected = 0;
  bool valid = false;

  double fa_e6() const noexcept { return fa * 1e6; }
  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

PixelConfusion pixel_confusion(const BinaryMask& pred, const BinaryMask& gt);

double dataset_iou(std::span<const PixelConfusion> confusions);
double dataset_niou(std::span<const double> per_image_iou);

TargetMatch match_targets(const ComponentSet& pred, const ComponentSet& gt, const MatchParams& params = {});
TargetStats target_stats(const ComponentSet& pred, const ComponentSet& gt, const MatchParams& params = {});

PdFa dataset_pd_fa(std::span<const TargetStats> per_image);

/// 0.5 * iou + 0.5 * pd, both in percent.
double score(double iou, double pd);

ImageMetrics evaluate_image(const BinaryMask& pred, const BinaryMask& gt, const MatchParams& params = {});

/// Combines per-image metrics into a report. Independent of image order.
EvalReport summarize(std::span<const ImageMetrics> images);

/// key=value lines; fa is printed in units of 1e-6.
std::string format_report(const EvalReport& r);
std::string report_json(const EvalReport& r);

}  // namespace irstd
