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

#include "irstd/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "irstd/components.hpp"

namespace irstd {

namespace {

constexpr int kPlacementRetries = 1000;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Independent streams so explicit targets render the same clutter and
// noise as sampled ones.
enum class Stream : std::uint64_t { background = 1, targets = 2, noise = 3 };

std::mt19937_64 stream(std::uint64_t seed, Stream s) {
  return std::mt19937_64(splitmix64(seed ^ (static_cast<std::uint64_t>(s) * 0xd1b54a32d192ed69ull)));
}

std::vector<double> gaussian_kernel(double sigma) {
  const int r = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> k(2 * r + 1);
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) {
    k[i + r] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    sum += k[i + r];
  }
  for (double& v : k) v /= sum;
  return k;
}

// Separable blur with edge replication.
std::vector<double> blur(const std::vector<double>& src, int w, int h, double sigma) {
  const auto k = gaussian_kernel(sigma);
  const int r = static_cast<int>(k.size() / 2);
  std::vector<double> tmp(src.size()), out(src.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += k[i + r] * src[y * w + std::clamp(x + i, 0, w - 1)];
      tmp[y * w + x] = acc;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += k[i + r] * tmp[std::clamp(y + i, 0, h - 1) * w + x];
      out[y * w + x] = acc;
    }
  }
  return out;
}

std::vector<double> background(const SceneConfig& cfg) {
  const std::size_t n = static_cast<std::size_t>(cfg.width) * cfg.height;
  std::vector<double> bg(n, cfg.background_offset);
  if (cfg.background_gain <= 0.0) return bg;

  auto rng = stream(cfg.rng_seed, Stream::background);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> white(n);
  for (double& v : white) v = normal(rng);
  const auto smooth = blur(white, cfg.width, cfg.height, cfg.background_scale);
  const auto [mn, mx] = std::minmax_element(smooth.begin(), smooth.end());
  const double span = *mx - *mn;
  for (std::size_t i = 0; i < n; ++i) {
    const double unit = span > 0.0 ? (smooth[i] - *mn) / span : 0.0;
    bg[i] += cfg.background_gain * unit;
  }
  return bg;
}

double uniform(std::mt19937_64& rng, const Range& r) {
  if (r.hi <= r.lo) return r.lo;
  return std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
}

std::vector<Target> place_targets(const SceneConfig& cfg) {
  auto rng = stream(cfg.rng_seed, Stream::targets);
  std::vector<Target> placed;
  for (int t = 0; t < cfg.target_count; ++t) {
    const double sigma = uniform(rng, cfg.sigma_range);
    const double amp = uniform(rng, cfg.amplitude_range);
    const int margin = static_cast<int>(std::ceil(3.0 * sigma));
    if (cfg.width - 1 - margin < margin || cfg.height - 1 - margin < margin) {
      throw PlacementError("scene " + std::to_string(cfg.width) + "x" + std::to_string(cfg.height) +
                           " too small for sigma " + std::to_string(sigma));
    }
    std::uniform_int_distribution<int> ux(margin, cfg.width - 1 - margin);
    std::uniform_int_distribution<int> uy(margin, cfg.height - 1 - margin);
    bool ok = false;
    for (int attempt = 0; attempt < kPlacementRetries && !ok; ++attempt) {
      const Target cand{ux(rng), uy(rng), sigma, amp};
      ok = std::all_of(placed.begin(), placed.end(), [&](const Target& o) {
        const double dx = cand.cx - o.cx;
        const double dy = cand.cy - o.cy;
        const double min_d = 3.0 * std::max(cand.sigma, o.sigma);
        return dx * dx + dy * dy >= min_d * min_d;
      });
      if (ok) placed.push_back(cand);
    }
    if (!ok) {
      throw PlacementError("could not place target " + std::to_string(t + 1) + " of " +
                           std::to_string(cfg.target_count) + " after " +
                           std::to_string(kPlacementRetries) + " attempts");
    }
  }
  return placed;
}

}  // namespace

void SceneConfig::validate() const {
  if (width <= 0 || height <= 0) throw ParameterError("scene: dimensions must be positive");
  if (target_count < 0) throw ParameterError("scene: target_count must be >= 0");
  if (amplitude_range.lo > amplitude_range.hi || amplitude_range.lo < 0.0) {
    throw ParameterError("scene: amplitude_range must satisfy 0 <= lo <= hi");
  }
  if (sigma_range.lo > sigma_range.hi || sigma_range.lo <= 0.0) {
    throw ParameterError("scene: sigma_range must satisfy 0 < lo <= hi");
  }
  if (!(noise_sigma >= 0.0) || !(background_gain >= 0.0) || !(background_offset >= 0.0)) {
    throw ParameterError("scene: noise_sigma, background_gain, background_offset must be >= 0");
  }
  if (background_gain > 0.0 && !(background_scale > 0.0)) {
    throw ParameterError("scene: background_scale must be > 0");
  }
}

Scene render_scene(const SceneConfig& cfg, const std::vector<Target>& targets) {
  cfg.validate();
  const int w = cfg.width;
  const int h = cfg.height;
  const std::size_t n = static_cast<std::size_t>(w) * h;
  for (const auto& t : targets) {
    if (t.cx < 0 || t.cy < 0 || t.cx >= w || t.cy >= h || !(t.sigma > 0.0) || t.amplitude < 0.0) {
      throw ParameterError("scene: target outside image or with invalid shape");
    }
  }

  std::vector<double> value = background(cfg);
  std::vector<std::uint8_t> mask(n, 0);
  std::vector<double> contrib(targets.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double sum = 0.0;
      double best = -1.0;
      double best_amp = 0.0;
      for (std::size_t k = 0; k < targets.size(); ++k) {
        const auto& t = targets[k];
        const double dx = x - t.cx;
        const double dy = y - t.cy;
        const double c = t.amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * t.sigma * t.sigma));
        sum += c;
        if (c > best) {
          best = c;
          best_amp = t.amplitude;
        }
      }
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      value[i] += sum;
      if (!targets.empty() && best_amp > 0.0 && sum >= 0.5 * best_amp) mask[i] = 1;
    }
  }

  if (cfg.noise_sigma > 0.0) {
    auto rng = stream(cfg.rng_seed, Stream::noise);
    std::normal_distribution<double> normal(0.0, cfg.noise_sigma);
    for (double& v : value) v += normal(rng);
  }

  std::vector<float> px(n);
  for (std::size_t i = 0; i < n; ++i) px[i] = static_cast<float>(std::clamp(value[i], 0.0, 1.0));

  Scene s{GrayImage(w, h, std::move(px)), BinaryMask(w, h, std::move(mask)), {}, targets};
  s.points = points_from_mask(s.mask);
  return s;
}

Scene gen_scene(const SceneConfig& cfg) {
  cfg.validate();
  return render_scene(cfg, place_targets(cfg));
}

PointSet points_from_mask(const BinaryMask& mask) {
  const ComponentSet cs = connected_components(mask, 8);
  PointSet pts;
  pts.reserve(cs.size());
  for (const auto& c : cs.components) pts.push_back(c.rounded_centroid());
  return pts;
}

std::string scene_id(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "scene_%04d", index);
  return buf;
}

SceneConfig dataset_scene_config(const DatasetConfig& cfg, int index) {
  if (cfg.min_targets < 0 || cfg.max_targets < cfg.min_targets) {
    throw ParameterError("dataset: need 0 <= min_targets <= max_targets");
  }
  SceneConfig sc = cfg.scene;
  const std::uint64_t mix = splitmix64(cfg.seed * 0x100000001b3ull + static_cast<std::uint64_t>(index));
  sc.rng_seed = mix;
  const auto span = static_cast<std::uint64_t>(cfg.max_targets - cfg.min_targets + 1);
  sc.target_count = cfg.min_targets + static_cast<int>(splitmix64(mix) % span);
  return sc;
}

std::vector<DatasetItem> gen_dataset(const DatasetConfig& cfg) {
  if (cfg.count < 0) throw ParameterError("dataset: count must be >= 0");
  std::vector<DatasetItem> out;
  out.reserve(static_cast<std::size_t>(cfg.count));
  for (int i = 0; i < cfg.count; ++i) out.push_back({scene_id(i), gen_scene(dataset_scene_config(cfg, i))});
  return out;
}

}  // namespace irstd
