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

#pragma once

#include "tpe/evaluation.hpp"
#include "tpe/io.hpp"

namespace tpe {

struct Rgb {
  uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

struct Image {
  GridDims dims;
  std::vector<Rgb> pixels;  // row-major

  explicit Image(GridDims d) : dims(d), pixels(static_cast<size_t>(d.width) * d.height) {}
  Rgb& at(int x, int y) { return pixels[static_cast<size_t>(y) * dims.width + x]; }
  const Rgb& at(int x, int y) const { return pixels[static_cast<size_t>(y) * dims.width + x]; }
};

/// Overlay convention: ground-truth rail area blue, estimated rail pixels
/// matching the ground truth green, unmatched ones red (all estimated pixels
/// green when no ground truth is given).
/// Returns the overview image followed by one image per ego-path.
std::vector<Image> render_overlay(const PathsDocument& doc, const Scene* gt,
                                  const MatchConfig& match_cfg);

/// Minimal deterministic PNG encoder: 8-bit RGB, stored (uncompressed)
/// deflate blocks, fixed chunk layout. Byte-stable across platforms.
std::string encode_png(const Image& img);

}  // namespace tpe
