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

// Two-map adjustable-sensitivity fusion: strong targets come from the
// refined map at th1, weak candidates from the unrefined map at th2. Weak
// components disjoint from the strong mask are added as one centroid pixel.

#include <optional>

#include "irstd/components.hpp"
#include "irstd/grid.hpp"

namespace irstd {

struct AsParams {
  float th1 = 0.01f;
  std::optional<float> th2 = 0.15f;  // nullopt: strong mask only
  int connectivity = 8;
  int min_weak_area = 1;

  void validate() const;
};

/// 1 where map >= th, th in (0, 1].
BinaryMask binarize(const ProbMap& map, float th);

BinaryMask apply_as(const ProbMap& refined, const ProbMap& raw, const AsParams& params = {});

}  // namespace irstd
