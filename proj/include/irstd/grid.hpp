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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "irstd/error.hpp"

namespace irstd {

// Value policies. Each tag names the domain of a grid kind and how a single
// value is checked on construction.
struct GrayTag {
  using value_type = float;
  static constexpr const char* name = "GrayImage";
  static bool valid(float v) { return std::isfinite(v) && v >= 0.0f && v <= 1.0f; }
};
struct ProbTag {
  using value_type = float;
  static constexpr const char* name = "ProbMap";
  static bool valid(float v) { return std::isfinite(v) && v >= 0.0f && v <= 1.0f; }
};
struct SaliencyTag {
  using value_type = float;
  static constexpr const char* name = "SaliencyMap";
  static bool valid(float v) { return std::isfinite(v); }
};
struct MaskTag {
  using value_type = std::uint8_t;
  static constexpr const char* name = "BinaryMask";
  static bool valid(std::uint8_t v) { return v <= 1; }
};

/// Row-major 2-D grid with a checked value domain. Immutable in spirit:
/// mutation goes through `data()` only by code that builds a new grid.
template <class Tag>
class Grid {
 public:
  using tag_type = Tag;
  using value_type = typename Tag::value_type;

  Grid() = default;

  /// Zero-filled grid.
  Grid(int width, int height) : width_(width), height_(height) {
    check_dims(width, height);
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                 value_type{});
  }

  Grid(int width, int height, value_type fill) : Grid(width, height) {
    std::fill(data_.begin(), data_.end(), fill);
    validate();
  }

  Grid(int width, int height, std::vector<value_type> data)
      : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width, height);
    if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
      throw DimensionError(std::string(Tag::name) + ": data length " +
                           std::to_string(data_.size()) + " != " + std::to_string(width) + "x" +
                           std::to_string(height));
    }
    validate();
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  value_type operator()(int x, int y) const { return data_[index(x, y)]; }
  value_type& operator()(int x, int y) { return data_[index(x, y)]; }

  std::span<const value_type> data() const noexcept { return data_; }
  std::span<value_type> data() noexcept { return data_; }
  std::span<const value_type> row(int y) const noexcept {
    return std::span<const value_type>(data_).subspan(static_cast<std::size_t>(y) * width_, width_);
  }
  std::span<value_type> row(int y) noexcept {
    return std::span<value_type>(data_).subspan(static_cast<std::size_t>(y) * width_, width_);
  }
  const std::vector<value_type>& values() const noexcept { return data_; }

  bool same_shape(int w, int h) const noexcept { return width_ == w && height_ == h; }
  template <class Other>
  bool same_shape(const Grid<Other>& o) const noexcept {
    return width_ == o.width() && height_ == o.height();
  }

  /// Re-checks every value against the tag's domain.
  void validate() const {
    for (std::size_t i = 0; i < data_.size(); ++i) {
      if (!Tag::valid(data_[i])) {
        throw RangeError(std::string(Tag::name) + ": value at index " + std::to_string(i) +
                         " outside domain");
      }
    }
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.data_ == b.data_;
  }

 private:
  static void check_dims(int w, int h) {
    if (w <= 0 || h <= 0) {
      throw DimensionError(std::string(Tag::name) + ": dimensions must be positive, got " +
                           std::to_string(w) + "x" + std::to_string(h));
    }
  }
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<value_type> data_;
};

using GrayImage = Grid<GrayTag>;
using ProbMap = Grid<ProbTag>;
using SaliencyMap = Grid<SaliencyTag>;
using BinaryMask = Grid<MaskTag>;

/// Reinterprets the values of one grid kind as another; the target domain is validated.
template <class To, class From>
Grid<To> grid_cast(const Grid<From>& src) {
  std::vector<typename To::value_type> out(src.data().begin(), src.data().end());
  return Grid<To>(src.width(), src.height(), std::move(out));
}

/// Mask as a {0,1} probability map.
inline ProbMap mask_to_prob(const BinaryMask& m) {
  std::vector<float> out(m.size());
  std::transform(m.data().begin(), m.data().end(), out.begin(),
                 [](std::uint8_t v) { return v ? 1.0f : 0.0f; });
  return ProbMap(m.width(), m.height(), std::move(out));
}

template <class A, class B>
void require_same_shape(const Grid<A>& a, const Grid<B>& b, const char* what) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(what) + ": " + std::to_string(a.width()) + "x" +
                         std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                         std::to_string(b.height()));
  }
}

/// Reverses each row.
template <class Tag>
Grid<Tag> flip_h(const Grid<Tag>& g) {
  Grid<Tag> out(g.width(), g.height());
  for (int y = 0; y < g.height(); ++y) {
    auto src = g.row(y);
    std::reverse_copy(src.begin(), src.end(), out.row(y).begin());
  }
  return out;
}

/// Reverses the row order.
template <class Tag>
Grid<Tag> flip_v(const Grid<Tag>& g) {
  Grid<Tag> out(g.width(), g.height());
  for (int y = 0; y < g.height(); ++y) {
    auto src = g.row(g.height() - 1 - y);
    std::copy(src.begin(), src.end(), out.row(y).begin());
  }
  return out;
}

/// The flip variants used for test-time augmentation. Each is self-inverse.
enum class TtaKind { identity, hflip, vflip };

inline const char* tta_name(TtaKind k) {
  switch (k) {
    case TtaKind::hflip:
      return "hflip";
    case TtaKind::vflip:
      return "vflip";
    default:
      return "identity";
  }
}

template <class Tag>
Grid<Tag> apply_flip(TtaKind kind, const Grid<Tag>& g) {
  switch (kind) {
    case TtaKind::hflip:
      return flip_h(g);
    case TtaKind::vflip:
      return flip_v(g);
    default:
      return g;
  }
}

/// Integer pixel coordinate: x is the column, y the row.
struct Point {
  int x = 0;
  int y = 0;
  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

using PointSet = std::vector<Point>;

/// Throws if any point lies outside a width x height image or appears twice.
void validate_points(const PointSet& pts, int width, int height);

}  // namespace irstd
