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

#include "irstd/tta.hpp"

#include <algorithm>
#include <string>

namespace irstd {

FusionReducer parse_reducer(std::string_view name) {
  if (name == "mean") return FusionReducer::mean;
  if (name == "max") return FusionReducer::max;
  if (name == "median") return FusionReducer::median;
  throw ParameterError("unknown fusion reducer '" + std::string(name) + "'");
}

std::vector<std::pair<TtaKind, GrayImage>> tta_variants(const GrayImage& img) {
  std::vector<std::pair<TtaKind, GrayImage>> out;
  out.reserve(3);
  out.emplace_back(TtaKind::identity, img);
  out.emplace_back(TtaKind::hflip, flip_h(img));
  out.emplace_back(TtaKind::vflip, flip_v(img));
  return out;
}

ProbMap tta_fuse(const std::vector<std::pair<TtaKind, ProbMap>>& maps, FusionReducer reducer) {
  if (maps.empty()) throw ParameterError("tta_fuse: no maps");
  const ProbMap& first = maps.front().second;
  for (const auto& [kind, m] : maps) require_same_shape(first, m, "tta_fuse");

  std::vector<ProbMap> aligned;
  aligned.reserve(maps.size());
  for (const auto& [kind, m] : maps) aligned.push_back(apply_flip(kind, m));

  const std::size_t n = first.size();
  const std::size_t k = aligned.size();
  std::vector<float> out(n);
  std::vector<float> vals(k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) vals[j] = aligned[j].data()[i];
    // Sorting first makes the reduction independent of variant order.
    std::sort(vals.begin(), vals.end());
    switch (reducer) {
      case FusionReducer::mean: {
        double s = 0.0;
        for (float v : vals) s += v;
        out[i] = static_cast<float>(s / static_cast<double>(k));
        break;
      }
      case FusionReducer::max:
        out[i] = vals.back();
        break;
      case FusionReducer::median:
        out[i] = k % 2 ? vals[k / 2] : static_cast<float>(0.5 * (double{vals[k / 2 - 1]} + vals[k / 2]));
        break;
    }
    out[i] = std::clamp(out[i], 0.0f, 1.0f);
  }
  return ProbMap(first.width(), first.height(), std::move(out));
}

}  // namespace irstd
