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

#include "irstd/backend.hpp"

#include "irstd/io.hpp"

namespace irstd {

std::vector<ProbMap> checked_infer(const ModelBackend& backend, std::span<const GrayImage> patches,
                                   std::span<const PatchKey> keys) {
  if (!keys.empty() && keys.size() != patches.size()) {
    throw DimensionError("infer_batch: " + std::to_string(keys.size()) + " keys for " +
                         std::to_string(patches.size()) + " patches");
  }
  for (const auto& p : patches) {
    if (!p.same_shape(patches.front())) throw DimensionError("infer_batch: patches differ in size");
  }
  auto out = backend.infer_batch(patches, keys);
  if (out.size() != patches.size()) {
    throw DimensionError(backend.name() + ": returned " + std::to_string(out.size()) + " maps for " +
                         std::to_string(patches.size()) + " patches");
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!out[i].same_shape(patches[i])) {
      throw DimensionError(backend.name() + ": output " + std::to_string(i) + " is " +
                           std::to_string(out[i].width()) + "x" + std::to_string(out[i].height()) +
                           ", patch is " + std::to_string(patches[i].width()) + "x" +
                           std::to_string(patches[i].height()));
    }
    out[i].validate();
  }
  return out;
}

ClassicalBackend::ClassicalBackend(DetectorKind kind, DetectorParams params)
    : kind_(kind), params_(std::move(params)) {
  params_.validate();
}

std::string ClassicalBackend::name() const {
  switch (kind_) {
    case DetectorKind::tophat:
      return "tophat";
    case DetectorKind::maxmed:
      return "maxmed";
    default:
      return "mlcm";
  }
}

ProbMap ClassicalBackend::infer_one(const GrayImage& patch) const {
  switch (kind_) {
    case DetectorKind::tophat:
      return normalize_saliency(white_tophat(patch, params_.tophat_size));
    case DetectorKind::maxmed:
      return normalize_saliency(max_median(patch, params_.maxmed_len));
    default:
      return normalize_saliency(local_contrast(patch, params_.lcm_cell_sizes, params_.epsilon));
  }
}

std::vector<ProbMap> ClassicalBackend::infer_batch(std::span<const GrayImage> patches,
                                                   std::span<const PatchKey>) const {
  std::vector<ProbMap> out;
  out.reserve(patches.size());
  for (const auto& p : patches) out.push_back(infer_one(p));
  return out;
}

ProbMap tile_from_full_map(const ProbMap& full, const PatchKey& key, int tile_w, int tile_h) {
  const ProbMap flipped = apply_flip(key.variant, full);
  ProbMap tile(tile_w, tile_h);
  for (int y = 0; y < tile_h; ++y) {
    const int sy = key.y0 + y;
    if (sy >= flipped.height()) break;
    for (int x = 0; x < tile_w; ++x) {
      const int sx = key.x0 + x;
      if (sx >= flipped.width()) break;
      tile(x, y) = flipped(sx, sy);
    }
  }
  return tile;
}

FileBackend::FileBackend(std::filesystem::path dir, std::optional<std::string> id)
    : dir_(std::move(dir)), id_(std::move(id)) {}

std::string FileBackend::name() const { return "fmap:" + dir_.string(); }

std::shared_ptr<const ProbMap> FileBackend::full_map(const std::string& id) const {
  {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(id); it != cache_.end()) return it->second;
  }
  auto map = std::make_shared<const ProbMap>(load_fmap(dir_ / (id + ".fmap")));
  std::lock_guard lock(mu_);
  return cache_.emplace(id, std::move(map)).first->second;
}

ProbMap FileBackend::serve(const GrayImage& patch, const PatchKey& key) const {
  const std::string id = id_.value_or(key.image_id);
  const std::string k = std::to_string(key.tile_index);
  const auto tile_path = key.variant == TtaKind::identity
                             ? dir_ / (id + "_" + k + ".fmap")
                             : dir_ / (id + "_" + tta_name(key.variant) + "_" + k + ".fmap");
  if (std::filesystem::exists(tile_path)) {
    ProbMap m = load_fmap(tile_path);
    if (!m.same_shape(patch)) {
      throw DimensionError(tile_path.string() + ": map is " + std::to_string(m.width()) + "x" +
                           std::to_string(m.height()) + ", patch is " + std::to_string(patch.width()) +
                           "x" + std::to_string(patch.height()));
    }
    return m;
  }
  const auto full_path = dir_ / (id + ".fmap");
  if (!std::filesystem::exists(full_path)) {
    throw MissingPredictionError("no prediction for image '" + id + "' tile " + k + " (" +
                                 tta_name(key.variant) + "): neither " + tile_path.string() +
                                 " nor " + full_path.string() + " exists");
  }
  const auto full = full_map(id);
  if (key.orig_width > 0 && !full->same_shape(key.orig_width, key.orig_height)) {
    throw DimensionError(full_path.string() + ": map is " + std::to_string(full->width()) + "x" +
                         std::to_string(full->height()) + ", image is " +
                         std::to_string(key.orig_width) + "x" + std::to_string(key.orig_height));
  }
  return tile_from_full_map(*full, key, patch.width(), patch.height());
}

std::vector<ProbMap> FileBackend::infer_batch(std::span<const GrayImage> patches,
                                              std::span<const PatchKey> keys) const {
  std::vector<ProbMap> out;
  out.reserve(patches.size());
  for (std::size_t i = 0; i < patches.size(); ++i) {
    PatchKey key;
    if (!keys.empty()) {
      key = keys[i];
    } else {
      key.tile_index = static_cast<int>(i);
    }
    if (!id_ && key.image_id.empty()) throw ParameterError("fmap backend: patch without image id");
    out.push_back(serve(patches[i], key));
  }
  return out;
}

StoredMapBackend::StoredMapBackend(std::map<std::string, ProbMap> maps) : maps_(std::move(maps)) {}

std::vector<ProbMap> StoredMapBackend::infer_batch(std::span<const GrayImage> patches,
                                                   std::span<const PatchKey> keys) const {
  if (keys.size() != patches.size()) throw ParameterError("stored backend: patches need keys");
  std::vector<ProbMap> out;
  out.reserve(patches.size());
  for (std::size_t i = 0; i < patches.size(); ++i) {
    const auto it = maps_.find(keys[i].image_id);
    if (it == maps_.end()) throw MissingPredictionError("no stored map for image '" + keys[i].image_id + "'");
    out.push_back(tile_from_full_map(it->second, keys[i], patches[i].width(), patches[i].height()));
  }
  return out;
}

std::unique_ptr<ModelBackend> make_backend(const std::string& name, const DetectorParams& params) {
  if (name == "tophat") return std::make_unique<ClassicalBackend>(DetectorKind::tophat, params);
  if (name == "maxmed") return std::make_unique<ClassicalBackend>(DetectorKind::maxmed, params);
  if (name == "mlcm") return std::make_unique<ClassicalBackend>(DetectorKind::mlcm, params);
  if (name.rfind("fmap:", 0) == 0 && name.size() > 5) return std::make_unique<FileBackend>(name.substr(5));
  throw ParameterError("unknown backend '" + name + "' (expected tophat, maxmed, mlcm or fmap:DIR)");
}

}  // namespace irstd
