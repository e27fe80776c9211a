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

#include "irstd/asfuse.hpp"

#include <algorithm>

namespace irstd {

namespace {

void check_threshold(float th, const char* what) {
  if (!(th > 0.0f && th <= 1.0f)) {
    throw ParameterError(std::string(what) + " must be in (0, 1], got " + std::to_string(th));
  }
}

}  // namespace

void AsParams::validate() const {
  check_threshold(th1, "th1");
  if (th2) check_threshold(*th2, "th2");
  if (connectivity != 4 && connectivity != 8) throw ParameterError("connectivity must be 4 or 8");
  if (min_weak_area < 1) throw ParameterError("min_weak_area must be >= 1");
}

BinaryMask binarize(const ProbMap& map, float th) {
  check_threshold(th, "threshold");
  std::vector<std::uint8_t> out(map.size());
  const auto v = map.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = v[i] >= th ? 1 : 0;
  return BinaryMask(map.width(), map.height(), std::move(out));
}

BinaryMask apply_as(const ProbMap& refined, const ProbMap& raw, const AsParams& params) {
  params.validate();
  require_same_shape(refined, raw, "apply_as: refined vs raw");
  BinaryMask out = binarize(refined, params.th1);
  if (!params.th2) return out;

  const BinaryMask strong = out;
  const ComponentSet weak = connected_components(binarize(raw, *params.th2), params.connectivity);
  const auto s = strong.data();
  for (const auto& c : weak.components) {
    if (c.area < params.min_weak_area) continue;
    const bool overlaps = std::any_of(c.pixels.begin(), c.pixels.end(), [&](std::uint32_t p) { return s[p] != 0; });
    if (overlaps) continue;
    const Point pc = c.rounded_centroid();
    out(pc.x, pc.y) = 1;
  }
  return out;
}

}  // namespace irstd
