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

// End-to-end inference: each flip variant of the whole image is padded,
// tiled, run through the backend in batches, stitched and cropped; the
// variants are un-flipped and fused, refined by the CRF against the input
// image, and finally thresholded by the two-map fusion.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "irstd/asfuse.hpp"
#include "irstd/backend.hpp"
#include "irstd/crf.hpp"
#include "irstd/grid.hpp"
#include "irstd/metrics.hpp"
#include "irstd/tiling.hpp"
#include "irstd/tta.hpp"

namespace irstd {

struct PipelineConfig {
  int win = kDefaultWindow;
  int batch = 32;
  bool tta_enabled = true;
  FusionReducer reducer = FusionReducer::mean;
  bool crf_enabled = true;
  CrfParams crf;
  AsParams as_params;
  int threads = 1;  // images processed concurrently by the dataset helpers

  void validate() const;
};

struct InferenceResult {
  ProbMap raw_fused;
  ProbMap refined;
  BinaryMask final_mask;
};

/// Fused (pre-CRF) probability map only.
ProbMap infer_raw(const GrayImage& img, const ModelBackend& backend, const PipelineConfig& cfg,
                  const std::string& image_id = {});

InferenceResult run_inference(const GrayImage& img, const ModelBackend& backend, const PipelineConfig& cfg,
                              const std::string& image_id = {});

struct EvalSample {
  std::string id;
  GrayImage image;
  BinaryMask truth;
};

/// Cached intermediate maps for one image of a sweep.
struct CachedMaps {
  ProbMap raw_fused;
  ProbMap refined;
};

/// Runs backend + fusion + CRF once per sample. Parallel over samples,
/// output order follows input order.
std::vector<CachedMaps> compute_maps(const std::vector<EvalSample>& samples, const ModelBackend& backend,
                                     const PipelineConfig& cfg);

struct SweepRow {
  float th1 = 0.0f;
  std::optional<float> th2;
  EvalReport report;
};

/// One row per (th1, th2) pair, th1-major.
std::vector<SweepRow> sweep(const std::vector<EvalSample>& samples, const std::vector<CachedMaps>& maps,
                            const std::vector<float>& th1_list, const std::vector<std::optional<float>>& th2_list,
                            const PipelineConfig& cfg, const MatchParams& match = {});

std::vector<SweepRow> sweep(const std::vector<EvalSample>& samples, const ModelBackend& backend,
                            const std::vector<float>& th1_list, const std::vector<std::optional<float>>& th2_list,
                            const PipelineConfig& cfg, const MatchParams& match = {});

struct DatasetRun {
  std::vector<InferenceResult> results;  // input order
  EvalReport report;
};

DatasetRun evaluate_dataset(const std::vector<EvalSample>& samples, const ModelBackend& backend,
                            const PipelineConfig& cfg, const MatchParams& match = {});

/// Aligned text table with columns th1, th2, IoU, nIoU, Pd, Fa(x1e-6), Score.
std::string format_sweep_table(const std::vector<SweepRow>& rows);

/// Parses "0.1,0.05"; in th2 lists "-" means no weak extraction.
std::vector<float> parse_threshold_list(const std::string& text);
std::vector<std::optional<float>> parse_optional_threshold_list(const std::string& text);

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Rethrows the
/// exception of the lowest failing index.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace irstd
