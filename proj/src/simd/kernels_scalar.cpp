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

#include <algorithm>
#include <cmath>

#include "irstd/simd/kernels.hpp"

namespace irstd::simd {

namespace {

void max_inplace(float* acc, const float* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] = src[i] > acc[i] ? src[i] : acc[i];
}

void min_inplace(float* acc, const float* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] = src[i] < acc[i] ? src[i] : acc[i];
}

void add_inplace(float* acc, const float* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += src[i];
}

void compare_exchange(float* lo, float* hi, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const float a = lo[i];
    const float b = hi[i];
    lo[i] = b < a ? b : a;
    hi[i] = a > b ? a : b;
  }
}

void crf_pair_row(const CrfPairRow& r) {
  for (std::size_t x = 0; x < r.n; ++x) {
    const float d = r.guide_a[x] - r.guide_b[x];
    const float k = r.smooth + r.app_weight * std::exp(std::max(-(r.app_spatial + d * d * r.inv_two_beta_sq), kCrfExpFloor));
    const float qa = r.q_a[x];
    const float qb = r.q_b[x];
    r.s_a[x] += k * qb;
    r.s_b[x] += k * qa;
    r.k_a[x] += k;
    r.k_b[x] += k;
  }
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{"scalar", Isa::scalar, max_inplace, min_inplace,
                         add_inplace, compare_exchange, crf_pair_row};
  return k;
}

}  // namespace irstd::simd
