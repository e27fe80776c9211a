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

#include <string_view>
#include <utility>
#include <vector>

#include "irstd/grid.hpp"

namespace irstd {

enum class FusionReducer { mean, max, median };

FusionReducer parse_reducer(std::string_view name);

/// [identity, flip_h(img), flip_v(img)], in that order.
std::vector<std::pair<TtaKind, GrayImage>> tta_variants(const GrayImage& img);

/// Undoes each variant's flip and reduces the aligned maps pixel-wise.
/// Accepts any nonempty list (three with augmentation, one without). The
/// result does not depend on the order of the list.
ProbMap tta_fuse(const std::vector<std::pair<TtaKind, ProbMap>>& maps,
                 FusionReducer reducer = FusionReducer::mean);

}  // namespace irstd
