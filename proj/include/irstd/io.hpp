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
#include <string_view>

#include "irstd/grid.hpp"

namespace irstd {

// Binary PGM (P5). 8-bit and 16-bit (big-endian) payloads; values are
// normalized by maxval on load.
GrayImage load_pgm(const std::filesystem::path& path);
GrayImage parse_pgm(std::string_view bytes);

/// Writes maxval 255, value = round(v * 255).
void save_pgm(const GrayImage& img, const std::filesystem::path& path);
/// Writes maxval 255, 0 -> 0 and 1 -> 255.
void save_pgm(const BinaryMask& mask, const std::filesystem::path& path);

/// Loads a PGM as a mask: any nonzero sample is a positive pixel.
BinaryMask load_pgm_mask(const std::filesystem::path& path);

// Float map container:
//   bytes 0..4   "FMAP\0"
//   bytes 5..8   width,  uint32 little-endian
//   bytes 9..12  height, uint32 little-endian
//   then width*height IEEE-754 float32 little-endian, row-major.
inline constexpr std::string_view kFmapMagic{"FMAP\0", 5};

ProbMap load_fmap(const std::filesystem::path& path);
ProbMap parse_fmap(std::string_view bytes);
void save_fmap(const ProbMap& map, const std::filesystem::path& path);
std::string encode_fmap(const ProbMap& map);

/// One "x,y" pair per line. Blank lines are ignored.
PointSet load_points(const std::filesystem::path& path);
PointSet parse_points(std::string_view text);
void save_points(const PointSet& pts, const std::filesystem::path& path);

}  // namespace irstd
