// Copyright 2026 The TPE Pipeline Authors
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

#include "tpe/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "tpe/gt_synthesis.hpp"

namespace tpe {

namespace {

constexpr Rgb kBlue{40, 60, 200};
constexpr Rgb kGreen{0, 200, 0};
constexpr Rgb kRed{220, 30, 30};
constexpr Rgb kWhite{255, 255, 255};

void put_pixel(Image& img, double x, int y, Rgb c) {
  const int xi = static_cast<int>(std::lround(x));
  if (xi < 0 || xi >= img.dims.width || y < 0 || y >= img.dims.height) return;
  img.at(xi, y) = c;
}

// Per-row gt rail columns, used for the TP/FP coloring.
struct GtRails {
  std::vector<std::vector<double>> per_row;  // rail x positions per row

  bool near(double x, int y, double radius, int height) const {
    const int y0 = std::max(0, static_cast<int>(std::ceil(y - radius)));
    const int y1 = std::min(height - 1, static_cast<int>(std::floor(y + radius)));
    for (int yy = y0; yy <= y1; ++yy) {
      for (double rx : per_row[yy])
        if (std::abs(rx - x) <= radius) return true;
    }
    return false;
  }
};

void draw_path(Image& img, const EgoPath& path, const GtRails* rails, double radius) {
  for (const Triplet& t : path.triplets) {
    for (double rx : {t.x_left, t.x_right}) {
      const bool tp = rails == nullptr || rails->near(rx, t.y, radius, img.dims.height);
      put_pixel(img, rx, t.y, tp ? kGreen : kRed);
    }
    put_pixel(img, t.x_center, t.y, kWhite);
  }
}

}  // namespace

std::vector<Image> render_overlay(const PathsDocument& doc, const Scene* gt,
                                  const MatchConfig& match_cfg) {
  Image base(doc.dims);
  std::optional<GtRails> rails;
  if (gt != nullptr) {
    if (!(gt->dims == doc.dims))
      throw ValidationError("render_overlay: scene and document dims differ");
    rails.emplace();
    rails->per_row.resize(doc.dims.height);
    for (const Track& t : gt->tracks) {
      const auto left = rasterize_polyline(t.left, gt->dims);
      const auto right = rasterize_polyline(t.right, gt->dims);
      for (const auto& [y, xl] : left) {
        rails->per_row[y].push_back(xl);
        const auto ri = right.find(y);
        if (ri == right.end()) continue;
        rails->per_row[y].push_back(ri->second);
        const int x0 = std::max(0, static_cast<int>(std::ceil(xl)));
        const int x1 = std::min(doc.dims.width - 1, static_cast<int>(std::floor(ri->second)));
        for (int x = x0; x <= x1; ++x) base.at(x, y) = kBlue;
      }
    }
  }

  std::vector<Image> out;
  Image overview = base;
  for (const EgoPath& p : doc.paths)
    draw_path(overview, p, rails ? &*rails : nullptr, match_cfg.radius);
  out.push_back(std::move(overview));
  for (const EgoPath& p : doc.paths) {
    Image per = base;
    draw_path(per, p, rails ? &*rails : nullptr, match_cfg.radius);
    out.push_back(std::move(per));
  }
  return out;
}

// ----------------------------------------------------------------- PNG

namespace {

uint32_t crc32(const uint8_t* data, size_t len, uint32_t crc = 0xffffffffu) {
  static const auto table = [] {
    std::array<uint32_t, 256> t{};
    for (uint32_t n = 0; n < 256; ++n) {
      uint32_t c = n;
      for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
      t[n] = c;
    }
    return t;
  }();
  for (size_t i = 0; i < len; ++i) crc = table[(crc ^ data[i]) & 0xff] ^ (crc >> 8);
  return crc;
}

void put_be32(std::string& out, uint32_t v) {
  for (int i = 3; i >= 0; --i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_chunk(std::string& out, const char type[4], const std::string& data) {
  put_be32(out, static_cast<uint32_t>(data.size()));
  const size_t start = out.size();
  out.append(type, 4);
  out.append(data);
  const uint32_t crc =
      ~crc32(reinterpret_cast<const uint8_t*>(out.data() + start), out.size() - start);
  put_be32(out, crc);
}

std::string zlib_stored(const std::string& raw) {
  std::string z;
  z.push_back(0x78);
  z.push_back(0x01);
  size_t pos = 0;
  do {
    const size_t n = std::min<size_t>(raw.size() - pos, 65535);
    const bool last = pos + n == raw.size();
    z.push_back(last ? 1 : 0);
    z.push_back(static_cast<char>(n & 0xff));
    z.push_back(static_cast<char>((n >> 8) & 0xff));
    z.push_back(static_cast<char>(~n & 0xff));
    z.push_back(static_cast<char>((~n >> 8) & 0xff));
    z.append(raw, pos, n);
    pos += n;
  } while (pos < raw.size());

  uint32_t a = 1, b = 0;
  for (unsigned char c : raw) {
    a = (a + c) % 65521;
    b = (b + a) % 65521;
  }
  put_be32(z, (b << 16) | a);
  return z;
}

}  // namespace

std::string encode_png(const Image& img) {
  std::string out("\x89PNG\r\n\x1a\n", 8);

  std::string ihdr;
  put_be32(ihdr, static_cast<uint32_t>(img.dims.width));
  put_be32(ihdr, static_cast<uint32_t>(img.dims.height));
  ihdr.push_back(8);   // bit depth
  ihdr.push_back(2);   // color type: truecolor
  ihdr.push_back(0);   // compression
  ihdr.push_back(0);   // filter
  ihdr.push_back(0);   // interlace
  put_chunk(out, "IHDR", ihdr);

  std::string raw;
  raw.reserve(static_cast<size_t>(img.dims.height) * (1 + 3 * img.dims.width));
  for (int y = 0; y < img.dims.height; ++y) {
    raw.push_back(0);  // filter: none
    for (int x = 0; x < img.dims.width; ++x) {
      const Rgb& p = img.at(x, y);
      raw.push_back(static_cast<char>(p.r));
      raw.push_back(static_cast<char>(p.g));
      raw.push_back(static_cast<char>(p.b));
    }
  }
  put_chunk(out, "IDAT", zlib_stored(raw));
  put_chunk(out, "IEND", "");
  return out;
}

}  // namespace tpe
