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

// Seeded synthetic infrared scenes: smooth clutter, white noise and
// isotropic Gaussian point targets, with half-maximum ground truth masks
// and centroid point labels.
//
// Random numbers come from std::mt19937_64 seeded with SceneConfig::rng_seed.
// Gaussian samples use std::normal_distribution, so output is bit-identical
// for a given standard library build, not across library vendors.

#include <cstdint>
#include <string>
#include <vector>

#include "irstd/grid.hpp"

namespace irstd {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct SceneConfig {
  int width = 256;
  int height = 256;
  int target_count = 2;
  Range amplitude_range{0.4, 0.8};
  Range sigma_range{1.0, 2.0};
  double noise_sigma = 0.02;
  double background_scale = 16.0;  // clutter correlation length, pixels
  double background_gain = 0.2;
  double background_offset = 0.0;  // constant pedestal added to the clutter
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// One Gaussian blob centred on pixel (cx, cy).
struct Target {
  int cx = 0;
  int cy = 0;
  double sigma = 1.0;
  double amplitude = 1.0;
};

struct Scene {
  GrayImage image;
  BinaryMask mask;
  PointSet points;
  std::vector<Target> targets;
};

/// Samples target positions and renders the scene.
Scene gen_scene(const SceneConfig& cfg);

/// Renders explicit targets over the clutter and noise described by cfg.
/// cfg.target_count is ignored.
Scene render_scene(const SceneConfig& cfg, const std::vector<Target>& targets);

/// One centroid point per 8-connected component, rounded half up.
PointSet points_from_mask(const BinaryMask& mask);

/// A reproducible set of scenes with a per-scene target count drawn from
/// [min_targets, max_targets].
struct DatasetConfig {
  int count = 100;
  int min_targets = 1;
  int max_targets = 3;
  SceneConfig scene;
  std::uint64_t seed = 0;
};

struct DatasetItem {
  std::string id;
  Scene scene;
};

/// Per-scene configuration: scene i uses a seed derived from (seed, i).
SceneConfig dataset_scene_config(const DatasetConfig& cfg, int index);
std::vector<DatasetItem> gen_dataset(const DatasetConfig& cfg);
std::string scene_id(int index);

}  // namespace irstd
