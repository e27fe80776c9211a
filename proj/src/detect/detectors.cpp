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

#include "irstd/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "irstd/simd/kernels.hpp"

namespace irstd {

namespace {

using KernelFn = void (*)(float*, const float*, std::size_t);

void check_odd(int size, const char* what) {
  if (size < 3 || size % 2 == 0) {
    throw ParameterError(std::string(what) + " must be odd and >= 3, got " + std::to_string(size));
  }
}

// Separable min/max filter: each pass folds `size` shifted copies into an
// accumulator with a lane-wise kernel.
SaliencyMap rank_filter(const SaliencyMap& img, int size, KernelFn fold) {
  const int w = img.width();
  const int h = img.height();
  const int r = size / 2;

  SaliencyMap horiz(w, h);
  std::vector<float> padded(static_cast<std::size_t>(w + 2 * r));
  for (int y = 0; y < h; ++y) {
    const auto row = img.row(y);
    for (int i = 0; i < w + 2 * r; ++i) padded[i] = row[std::clamp(i - r, 0, w - 1)];
    auto out = horiz.row(y);
    std::copy_n(padded.begin(), w, out.begin());
    for (int k = 1; k < size; ++k) fold(out.data(), padded.data() + k, static_cast<std::size_t>(w));
  }

  SaliencyMap out(w, h);
  for (int y = 0; y < h; ++y) {
    auto dst = out.row(y);
    const auto first = horiz.row(std::clamp(y - r, 0, h - 1));
    std::copy(first.begin(), first.end(), dst.begin());
    for (int k = 1; k < size; ++k) {
      fold(dst.data(), horiz.row(std::clamp(y - r + k, 0, h - 1)).data(), static_cast<std::size_t>(w));
    }
  }
  return out;
}

SaliencyMap as_saliency(const GrayImage& img) {
  return SaliencyMap(img.width(), img.height(), std::vector<float>(img.data().begin(), img.data().end()));
}

SaliencyMap pad_replicate(const SaliencyMap& img, int pad) {
  const int w = img.width();
  const int h = img.height();
  SaliencyMap out(w + 2 * pad, h + 2 * pad);
  for (int y = 0; y < out.height(); ++y) {
    const auto src = img.row(std::clamp(y - pad, 0, h - 1));
    auto dst = out.row(y);
    for (int x = 0; x < out.width(); ++x) dst[x] = src[std::clamp(x - pad, 0, w - 1)];
  }
  return out;
}

}  // namespace

void DetectorParams::validate() const {
  check_odd(tophat_size, "tophat_size");
  check_odd(maxmed_len, "maxmed_len");
  if (lcm_cell_sizes.empty()) throw ParameterError("lcm_cell_sizes must not be empty");
  for (int s : lcm_cell_sizes) check_odd(s, "lcm cell size");
  if (!(epsilon > 0.0f)) throw ParameterError("epsilon must be > 0");
}

SaliencyMap erode(const SaliencyMap& img, int size) {
  check_odd(size, "structuring element size");
  return rank_filter(img, size, simd::active().min_inplace);
}

SaliencyMap dilate(const SaliencyMap& img, int size) {
  check_odd(size, "structuring element size");
  return rank_filter(img, size, simd::active().max_inplace);
}

std::vector<double> box_sum(const SaliencyMap& img, int size) {
  const int w = img.width();
  const int h = img.height();
  const int r = size / 2;
  std::vector<double> horiz(img.size()), out(img.size());
  for (int y = 0; y < h; ++y) {
    const auto row = img.row(y);
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -r; k <= r; ++k) acc += row[std::clamp(x + k, 0, w - 1)];
      horiz[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -r; k <= r; ++k) acc += horiz[static_cast<std::size_t>(std::clamp(y + k, 0, h - 1)) * w + x];
      out[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  return out;
}

SaliencyMap white_tophat(const GrayImage& img, int size) {
  check_odd(size, "tophat size");
  const SaliencyMap src = as_saliency(img);
  const SaliencyMap opened = dilate(erode(src, size), size);
  SaliencyMap out(img.width(), img.height());
  auto o = out.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = std::max(src.data()[i] - opened.data()[i], 0.0f);
  return out;
}

SaliencyMap max_median(const GrayImage& img, int len) {
  check_odd(len, "max-median length");
  const int w = img.width();
  const int h = img.height();
  const std::size_t n = img.size();
  const int r = len / 2;
  const auto& k = simd::active();

  static constexpr int kDirs[4][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
  std::vector<float> best(n, -std::numeric_limits<float>::infinity());
  std::vector<std::vector<float>> lines(static_cast<std::size_t>(len), std::vector<float>(n));
  for (const auto& dir : kDirs) {
    for (int t = 0; t < len; ++t) {
      auto& dst = lines[t];
      const int ox = (t - r) * dir[0];
      const int oy = (t - r) * dir[1];
      for (int y = 0; y < h; ++y) {
        const auto src = img.row(std::clamp(y + oy, 0, h - 1));
        float* d = dst.data() + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) d[x] = src[std::clamp(x + ox, 0, w - 1)];
      }
    }
    // Odd-even transposition sort across the len samples of every pixel.
    for (int pass = 0; pass < len; ++pass) {
      for (int i = pass % 2; i + 1 < len; i += 2) k.compare_exchange(lines[i].data(), lines[i + 1].data(), n);
    }
    k.max_inplace(best.data(), lines[r].data(), n);
  }

  SaliencyMap out(w, h);
  auto o = out.data();
  for (std::size_t i = 0; i < n; ++i) o[i] = std::max(img.data()[i] - best[i], 0.0f);
  return out;
}

SaliencyMap local_contrast_scale(const SaliencyMap& img, int s, float eps) {
  check_odd(s, "lcm cell size");
  if (!(eps > 0.0f)) throw ParameterError("lcm epsilon must be > 0");
  const int w = img.width();
  const int h = img.height();
  const int pad = s + s / 2;
  const SaliencyMap ext = pad_replicate(img, pad);
  const int ew = ext.width();
  const SaliencyMap cell_max = dilate(ext, s);
  const std::vector<double> sums = box_sum(ext, s);
  const double area = static_cast<double>(s) * s;

  SaliencyMap means(ew, ext.height());
  auto m = means.data();
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = static_cast<float>(sums[i] / area);

  // Largest neighbour-cell mean per pixel; dividing by it gives the
  // minimum ratio since L^2 >= 0.
  const auto& k = simd::active();
  std::vector<float> max_mean(static_cast<std::size_t>(w) * h, -std::numeric_limits<float>::infinity());
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      if (dx == 0 && dy == 0) continue;
      for (int y = 0; y < h; ++y) {
        const float* src = means.row(y + pad + dy * s).data() + pad + dx * s;
        k.max_inplace(max_mean.data() + static_cast<std::size_t>(y) * w, src, static_cast<std::size_t>(w));
      }
    }
  }

  SaliencyMap out(w, h);
  for (int y = 0; y < h; ++y) {
    const auto lrow = cell_max.row(y + pad);
    auto dst = out.row(y);
    for (int x = 0; x < w; ++x) {
      const float l = lrow[x + pad];
      dst[x] = (l * l) / std::max(max_mean[static_cast<std::size_t>(y) * w + x], eps);
    }
  }
  return out;
}

SaliencyMap local_contrast(const GrayImage& img, std::span<const int> cell_sizes, float eps) {
  if (cell_sizes.empty()) throw ParameterError("lcm: empty scale list");
  const SaliencyMap src = as_saliency(img);
  SaliencyMap acc = local_contrast_scale(src, cell_sizes[0], eps);
  for (std::size_t i = 1; i < cell_sizes.size(); ++i) {
    const SaliencyMap c = local_contrast_scale(src, cell_sizes[i], eps);
    simd::active().max_inplace(acc.data().data(), c.data().data(), acc.size());
  }
  const float mn = *std::min_element(acc.data().begin(), acc.data().end());
  for (float& v : acc.data()) v -= mn;
  return acc;
}

ProbMap normalize_saliency(const SaliencyMap& map) {
  map.validate();
  const auto [mn_it, mx_it] = std::minmax_element(map.data().begin(), map.data().end());
  const double mn = *mn_it;
  const double mx = *mx_it;
  std::vector<float> out(map.size(), 0.0f);
  if (mx > mn) {
    const double span = mx - mn;
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = static_cast<float>(std::clamp((map.data()[i] - mn) / span, 0.0, 1.0));
    }
  }
  return ProbMap(map.width(), map.height(), std::move(out));
}

}  // namespace irstd
