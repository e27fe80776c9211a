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

#include "irstd/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>

namespace irstd {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

// Reads one unsigned decimal header field, skipping whitespace and comments.
unsigned long header_field(std::string_view bytes, std::size_t& pos, const char* field) {
  for (;;) {
    while (pos < bytes.size() && is_space(bytes[pos])) ++pos;
    if (pos < bytes.size() && bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  unsigned long value = 0;
  auto [end, ec] = std::from_chars(bytes.data() + pos, bytes.data() + bytes.size(), value);
  if (ec != std::errc{} || end == bytes.data() + pos) {
    throw ParseError(std::string("pgm: malformed header: bad ") + field);
  }
  pos = static_cast<std::size_t>(end - bytes.data());
  return value;
}

std::uint32_t read_u32le(const char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(p[i]);
  return v;
}

void append_u32le(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

std::string encode_pgm8(int w, int h, const std::vector<std::uint8_t>& px) {
  std::string out = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  out.append(reinterpret_cast<const char*>(px.data()), px.size());
  return out;
}

}  // namespace

void validate_points(const PointSet& pts, int width, int height) {
  std::set<Point> seen;
  for (const auto& p : pts) {
    if (p.x < 0 || p.y < 0 || p.x >= width || p.y >= height) {
      throw RangeError("point (" + std::to_string(p.x) + "," + std::to_string(p.y) +
                       ") outside " + std::to_string(width) + "x" + std::to_string(height));
    }
    if (!seen.insert(p).second) {
      throw RangeError("duplicate point (" + std::to_string(p.x) + "," + std::to_string(p.y) + ")");
    }
  }
}

GrayImage parse_pgm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw ParseError("pgm: malformed header: missing P5 magic");
  }
  std::size_t pos = 2;
  const unsigned long w = header_field(bytes, pos, "width");
  const unsigned long h = header_field(bytes, pos, "height");
  const unsigned long maxval = header_field(bytes, pos, "maxval");
  if (w == 0 || h == 0 || w > (1ul << 20) || h > (1ul << 20)) {
    throw ParseError("pgm: malformed header: bad dimensions");
  }
  if (maxval != 255 && maxval != 65535) {
    throw ParseError("pgm: unsupported maxval " + std::to_string(maxval));
  }
  if (pos >= bytes.size() || !is_space(bytes[pos])) {
    throw ParseError("pgm: malformed header: missing separator before payload");
  }
  ++pos;
  const std::size_t bpp = maxval == 255 ? 1 : 2;
  const std::size_t n = w * h;
  const std::size_t have = bytes.size() - pos;
  if (have < n * bpp) {
    throw ParseError("pgm: truncated payload: expected " + std::to_string(n * bpp) +
                     " bytes, got " + std::to_string(have));
  }
  if (have > n * bpp) {
    throw ParseError("pgm: payload length " + std::to_string(have) +
                     " exceeds header dimensions");
  }
  std::vector<float> data(n);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + pos);
  const float scale = static_cast<float>(maxval);
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned raw = bpp == 1 ? p[i] : (static_cast<unsigned>(p[2 * i]) << 8) | p[2 * i + 1];
    if (raw > maxval) throw RangeError("pgm: sample exceeds maxval");
    data[i] = static_cast<float>(raw) / scale;
  }
  return GrayImage(static_cast<int>(w), static_cast<int>(h), std::move(data));
}

GrayImage load_pgm(const std::filesystem::path& path) {
  try {
    return parse_pgm(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

BinaryMask load_pgm_mask(const std::filesystem::path& path) {
  const GrayImage img = load_pgm(path);
  std::vector<std::uint8_t> m(img.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = img.data()[i] > 0.0f ? 1 : 0;
  return BinaryMask(img.width(), img.height(), std::move(m));
}

void save_pgm(const GrayImage& img, const std::filesystem::path& path) {
  std::vector<std::uint8_t> px(img.size());
  for (std::size_t i = 0; i < px.size(); ++i) {
    px[i] = static_cast<std::uint8_t>(std::lround(static_cast<double>(img.data()[i]) * 255.0));
  }
  write_file(path, encode_pgm8(img.width(), img.height(), px));
}

void save_pgm(const BinaryMask& mask, const std::filesystem::path& path) {
  std::vector<std::uint8_t> px(mask.size());
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = mask.data()[i] ? 255 : 0;
  write_file(path, encode_pgm8(mask.width(), mask.height(), px));
}

ProbMap parse_fmap(std::string_view bytes) {
  constexpr std::size_t kHeader = 5 + 4 + 4;
  if (bytes.size() < 5 || bytes.substr(0, 5) != kFmapMagic) {
    throw ParseError("fmap: bad magic");
  }
  if (bytes.size() < kHeader) throw ParseError("fmap: truncated header");
  const std::uint32_t w = read_u32le(bytes.data() + 5);
  const std::uint32_t h = read_u32le(bytes.data() + 9);
  if (w == 0 || h == 0) throw DimensionError("fmap: zero dimension");
  const std::uint64_t n = static_cast<std::uint64_t>(w) * h;
  const std::uint64_t payload = bytes.size() - kHeader;
  if (payload != n * 4) {
    throw DimensionError("fmap: header says " + std::to_string(w) + "x" + std::to_string(h) +
                         " but payload holds " + std::to_string(payload / 4) + " values");
  }
  std::vector<float> data(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::uint32_t bits = read_u32le(bytes.data() + kHeader + 4 * i);
    const float v = std::bit_cast<float>(bits);
    if (!std::isfinite(v) || v < 0.0f || v > 1.0f) {
      throw RangeError("fmap: value at index " + std::to_string(i) + " is non-finite or outside [0,1]");
    }
    data[i] = v;
  }
  return ProbMap(static_cast<int>(w), static_cast<int>(h), std::move(data));
}

ProbMap load_fmap(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  try {
    return parse_fmap(bytes);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const DimensionError& e) {
    throw DimensionError(path.string() + ": " + e.what());
  } catch (const RangeError& e) {
    throw RangeError(path.string() + ": " + e.what());
  }
}

std::string encode_fmap(const ProbMap& map) {
  std::string out(kFmapMagic);
  out.reserve(13 + 4 * map.size());
  append_u32le(out, static_cast<std::uint32_t>(map.width()));
  append_u32le(out, static_cast<std::uint32_t>(map.height()));
  for (float v : map.data()) append_u32le(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

void save_fmap(const ProbMap& map, const std::filesystem::path& path) {
  write_file(path, encode_fmap(map));
}

PointSet parse_points(std::string_view text) {
  PointSet pts;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    while (!line.empty() && is_space(line.back())) line.remove_suffix(1);
    while (!line.empty() && is_space(line.front())) line.remove_prefix(1);
    if (line.empty()) continue;

    const std::size_t comma = line.find(',');
    auto parse_int = [&](std::string_view tok) {
      while (!tok.empty() && is_space(tok.back())) tok.remove_suffix(1);
      while (!tok.empty() && is_space(tok.front())) tok.remove_prefix(1);
      int v = 0;
      auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (tok.empty() || ec != std::errc{} || end != tok.data() + tok.size()) {
        throw ParseError("points: line " + std::to_string(line_no) + ": non-integer token '" +
                         std::string(tok) + "'");
      }
      return v;
    };
    if (comma == std::string_view::npos) {
      throw ParseError("points: line " + std::to_string(line_no) + ": expected x,y");
    }
    pts.push_back({parse_int(line.substr(0, comma)), parse_int(line.substr(comma + 1))});
  }
  return pts;
}

PointSet load_points(const std::filesystem::path& path) {
  try {
    return parse_points(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_points(const PointSet& pts, const std::filesystem::path& path) {
  std::string out;
  for (const auto& p : pts) out += std::to_string(p.x) + "," + std::to_string(p.y) + "\n";
  write_file(path, out);
}

}  // namespace irstd
