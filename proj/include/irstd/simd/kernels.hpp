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

// Data-parallel inner loops shared by the detectors and the CRF.
//
// Every kernel exists as a scalar reference and, where the build and CPU
// allow it, an AVX2 variant. The active table is chosen once at startup
// from CPUID and can be overridden with set_active_isa() or the
// IRSTD_SIMD environment variable ("scalar", "avx2", "auto").
//
// The min/max/add/compare-exchange kernels are lane-wise and give
// bit-identical results across variants. crf_pair_row uses a polynomial
// exp in the AVX2 variant and agrees with the scalar one to ~1e-6 relative.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace irstd::simd {

enum class Isa { scalar, avx2 };

/// One row of symmetric pairwise CRF accumulation for a fixed offset o:
/// for every x < n, with a = pixel x of the first row and b = a + o,
///   k  = smooth + app_weight * exp(max(-(app_spatial + (Ia - Ib)^2 * inv_two_beta_sq), kCrfExpFloor))
///   sa += k * qb;  sb += k * qa;  ka += k;  kb += k.
/// `sa`/`sb` (and `ka`/`kb`) may alias with a positive element offset.
/// The exponent floor keeps every product with q >= 2^-24 out of the
/// subnormal range, which is several times slower on x86.
inline constexpr float kCrfExpFloor = -60.0f;

struct CrfPairRow {
  const float* guide_a;
  const float* guide_b;
  const float* q_a;
  const float* q_b;
  float* s_a;
  float* s_b;
  float* k_a;
  float* k_b;
  std::size_t n;
  float smooth;
  float app_weight;
  float app_spatial;
  float inv_two_beta_sq;
};

struct Kernels {
  const char* name;
  Isa isa;
  /// acc[i] = max(acc[i], src[i])
  void (*max_inplace)(float* acc, const float* src, std::size_t n);
  /// acc[i] = min(acc[i], src[i])
  void (*min_inplace)(float* acc, const float* src, std::size_t n);
  /// acc[i] += src[i]
  void (*add_inplace)(float* acc, const float* src, std::size_t n);
  /// (lo[i], hi[i]) = (min, max) of the pair
  void (*compare_exchange)(float* lo, float* hi, std::size_t n);
  void (*crf_pair_row)(const CrfPairRow& row);
};

const Kernels& scalar_kernels();
/// Null when the library was built without AVX2 support.
const Kernels* avx2_kernels();

bool isa_available(Isa isa);
std::vector<Isa> available_isas();
const Kernels& kernels_for(Isa isa);

/// The table used by the library.
const Kernels& active();
Isa active_isa();
/// Throws ParameterError if the ISA is not available.
void set_active_isa(Isa isa);
Isa best_isa();

Isa parse_isa(std::string_view name);
std::string isa_name(Isa isa);

/// RAII override of the active ISA, restores the previous one on scope exit.
class ScopedIsa {
 public:
  explicit ScopedIsa(Isa isa) : previous_(active_isa()) { set_active_isa(isa); }
  ~ScopedIsa() { set_active_isa(previous_); }
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;

 private:
  Isa previous_;
};

}  // namespace irstd::simd
