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

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "irstd/detectors.hpp"
#include "irstd/grid.hpp"

namespace irstd {

/// Where a patch came from. Classical detectors ignore it; the file
/// backend uses it to find the stored prediction.
struct PatchKey {
  std::string image_id;
  TtaKind variant = TtaKind::identity;
  int tile_index = 0;
  int x0 = 0;
  int y0 = 0;
  int orig_width = 0;   // unpadded image size
  int orig_height = 0;
};

/// A probability-map model. Implementations must be safe to call from
/// several threads at once.
class ModelBackend {
 public:
  virtual ~ModelBackend() = default;
  virtual std::string name() const = 0;

  /// All patches share one size. `keys` is either empty or parallel to
  /// `patches`. Returns one map per patch, same size, same order.
  virtual std::vector<ProbMap> infer_batch(std::span<const GrayImage> patches,
                                           std::span<const PatchKey> keys) const = 0;
};

/// Calls the backend and enforces its output contract: count, dimensions
/// and the [0,1] range.
std::vector<ProbMap> checked_infer(const ModelBackend& backend, std::span<const GrayImage> patches,
                                   std::span<const PatchKey> keys = {});

enum class DetectorKind { tophat, maxmed, mlcm };

/// Saliency detector followed by per-patch min-max normalisation.
class ClassicalBackend final : public ModelBackend {
 public:
  ClassicalBackend(DetectorKind kind, DetectorParams params = {});
  std::string name() const override;
  std::vector<ProbMap> infer_batch(std::span<const GrayImage> patches,
                                   std::span<const PatchKey> keys) const override;
  ProbMap infer_one(const GrayImage& patch) const;

 private:
  DetectorKind kind_;
  DetectorParams params_;
};

/// Serves externally computed predictions from a directory.
///
/// For a patch keyed (id, variant, k) it looks for, in order:
///   <dir>/<id>_<k>.fmap            identity variant, tile k
///   <dir>/<id>_<variant>_<k>.fmap  flipped variants, tile k
///   <dir>/<id>.fmap                one full-size map of the unflipped
///                                  image; flipped, zero-padded and cut
///                                  to the requested tile on demand
/// A fixed id given at construction overrides the keys' image ids.
class FileBackend final : public ModelBackend {
 public:
  explicit FileBackend(std::filesystem::path dir, std::optional<std::string> id = std::nullopt);
  std::string name() const override;
  std::vector<ProbMap> infer_batch(std::span<const GrayImage> patches,
                                   std::span<const PatchKey> keys) const override;

 private:
  ProbMap serve(const GrayImage& patch, const PatchKey& key) const;
  std::shared_ptr<const ProbMap> full_map(const std::string& id) const;

  std::filesystem::path dir_;
  std::optional<std::string> id_;
  mutable std::mutex mu_;
  mutable std::map<std::string, std::shared_ptr<const ProbMap>> cache_;
};

/// In-memory full-size maps keyed by image id, served like the full-map
/// mode of FileBackend. Flip-equivariant by construction.
class StoredMapBackend final : public ModelBackend {
 public:
  explicit StoredMapBackend(std::map<std::string, ProbMap> maps);
  std::string name() const override { return "stored"; }
  std::vector<ProbMap> infer_batch(std::span<const GrayImage> patches,
                                   std::span<const PatchKey> keys) const override;

 private:
  std::map<std::string, ProbMap> maps_;
};

/// Cuts the tile described by `key` out of a full-size unflipped map.
ProbMap tile_from_full_map(const ProbMap& full, const PatchKey& key, int tile_w, int tile_h);

/// "tophat", "maxmed", "mlcm" or "fmap:<dir>".
std::unique_ptr<ModelBackend> make_backend(const std::string& name, const DetectorParams& params = {});

}  // namespace irstd
