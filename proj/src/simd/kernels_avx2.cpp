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

// Compiled with -mavx2 -mfma. Nothing in here may run before the dispatcher
// has confirmed CPU support.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "irstd/simd/kernels.hpp"

namespace irstd::simd {

namespace {

constexpr std::size_t kLanes = 8;

// Cephes-style expf: range reduction by ln2 split in two parts, degree 5
// minimax polynomial, exponent rebuilt with an integer add. Inputs below
// -87.3 flush to a tiny positive value, which the callers treat as zero.
inline __m256 exp256(__m256 x) {
  const __m256 hi = _mm256_set1_ps(88.3762626647949f);
  const __m256 lo = _mm256_set1_ps(-87.3365478515625f);
  const __m256 log2e = _mm256_set1_ps(1.44269504088896341f);
  const __m256 c1 = _mm256_set1_ps(0.693359375f);
  const __m256 c2 = _mm256_set1_ps(-2.12194440e-4f);
  const __m256 one = _mm256_set1_ps(1.0f);

  x = _mm256_min_ps(x, hi);
  x = _mm256_max_ps(x, lo);

  __m256 fx = _mm256_round_ps(_mm256_mul_ps(x, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  x = _mm256_fnmadd_ps(fx, c1, x);
  x = _mm256_fnmadd_ps(fx, c2, x);

  __m256 y = _mm256_set1_ps(1.9875691500e-4f);
  y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(1.3981999507e-3f));
  y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(8.3334519073e-3f));
  y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(4.1665795894e-2f));
  y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(1.6666665459e-1f));
  y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(5.0000001201e-1f));
  const __m256 x2 = _mm256_mul_ps(x, x);
  y = _mm256_fmadd_ps(y, x2, x);
  y = _mm256_add_ps(y, one);

  __m256i n = _mm256_cvtps_epi32(fx);
  n = _mm256_add_epi32(n, _mm256_set1_epi32(127));
  n = _mm256_slli_epi32(n, 23);
  return _mm256_mul_ps(y, _mm256_castsi256_ps(n));
}

void max_inplace(float* acc, const float* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256 a = _mm256_loadu_ps(acc + i);
    const __m256 s = _mm256_loadu_ps(src + i);
    _mm256_storeu_ps(acc + i, _mm256_max_ps(s, a));
  }
  for (; i < n; ++i) acc[i] = src[i] > acc[i] ? src[i] : acc[i];
}

void min_inplace(float* acc, const float* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256 a = _mm256_loadu_ps(acc + i);
    const __m256 s = _mm256_loadu_ps(src + i);
    _mm256_storeu_ps(acc + i, _mm256_min_ps(s, a));
  }
  for (; i < n; ++i) acc[i] = src[i] < acc[i] ? src[i] : acc[i];
}

void add_inplace(float* acc, const float* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_ps(acc + i, _mm256_add_ps(_mm256_loadu_ps(acc + i), _mm256_loadu_ps(src + i)));
  }
  for (; i < n; ++i) acc[i] += src[i];
}

void compare_exchange(float* lo, float* hi, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256 a = _mm256_loadu_ps(lo + i);
    const __m256 b = _mm256_loadu_ps(hi + i);
    _mm256_storeu_ps(lo + i, _mm256_min_ps(b, a));
    _mm256_storeu_ps(hi + i, _mm256_max_ps(a, b));
  }
  for (; i < n; ++i) {
    const float a = lo[i];
    const float b = hi[i];
    lo[i] = b < a ? b : a;
    hi[i] = a > b ? a : b;
  }
}

void crf_pair_row(const CrfPairRow& r) {
  const __m256 smooth = _mm256_set1_ps(r.smooth);
  const __m256 wapp = _mm256_set1_ps(r.app_weight);
  const __m256 spatial = _mm256_set1_ps(r.app_spatial);
  const __m256 inv = _mm256_set1_ps(r.inv_two_beta_sq);
  const __m256 zero = _mm256_setzero_ps();
  const __m256 floor = _mm256_set1_ps(kCrfExpFloor);
  std::size_t x = 0;
  for (; x + kLanes <= r.n; x += kLanes) {
    const __m256 d = _mm256_sub_ps(_mm256_loadu_ps(r.guide_a + x), _mm256_loadu_ps(r.guide_b + x));
    const __m256 arg = _mm256_max_ps(_mm256_sub_ps(zero, _mm256_fmadd_ps(_mm256_mul_ps(d, d), inv, spatial)), floor);
    const __m256 k = _mm256_fmadd_ps(wapp, exp256(arg), smooth);
    const __m256 qa = _mm256_loadu_ps(r.q_a + x);
    const __m256 qb = _mm256_loadu_ps(r.q_b + x);
    // The a-side store must land before the b-side load: the rows alias
    // when the offset is purely horizontal.
    _mm256_storeu_ps(r.s_a + x, _mm256_fmadd_ps(k, qb, _mm256_loadu_ps(r.s_a + x)));
    _mm256_storeu_ps(r.k_a + x, _mm256_add_ps(k, _mm256_loadu_ps(r.k_a + x)));
    _mm256_storeu_ps(r.s_b + x, _mm256_fmadd_ps(k, qa, _mm256_loadu_ps(r.s_b + x)));
    _mm256_storeu_ps(r.k_b + x, _mm256_add_ps(k, _mm256_loadu_ps(r.k_b + x)));
  }
  for (; x < r.n; ++x) {
    const float d = r.guide_a[x] - r.guide_b[x];
    const float k = r.smooth + r.app_weight * std::exp(std::max(-(r.app_spatial + d * d * r.inv_two_beta_sq), kCrfExpFloor));
    const float qa = r.q_a[x];
    const float qb = r.q_b[x];
    r.s_a[x] += k * qb;
    r.k_a[x] += k;
    r.s_b[x] += k * qa;
    r.k_b[x] += k;
  }
}

}  // namespace

const Kernels* avx2_kernels() {
  static const Kernels k{"avx2", Isa::avx2, max_inplace, min_inplace,
                         add_inplace, compare_exchange, crf_pair_row};
  return &k;
}

}  // namespace irstd::simd
