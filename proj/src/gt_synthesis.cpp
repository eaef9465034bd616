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

#include "tpe/gt_synthesis.hpp"

#include <algorithm>
#include <cmath>

namespace tpe {

namespace {

struct RasterTrack {
  int id = 0;
  std::map<int, double> left;
  std::map<int, double> right;
};

std::vector<RasterTrack> rasterize_tracks(const Scene& scene) {
  std::vector<RasterTrack> out;
  out.reserve(scene.tracks.size());
  for (const Track& t : scene.tracks) {
    RasterTrack rt;
    rt.id = t.id;
    rt.left = rasterize_polyline(t.left, scene.dims);
    rt.right = rasterize_polyline(t.right, scene.dims);
    out.push_back(std::move(rt));
  }
  // Ascending id order; later tracks overwrite in the 3-channel distance maps.
  std::sort(out.begin(), out.end(),
            [](const RasterTrack& a, const RasterTrack& b) { return a.id < b.id; });
  return out;
}

// Integer columns covered by the rail area [xl, xr] on one row, clipped to
// the image.
std::pair<int, int> covered_columns(double xl, double xr, int width) {
  int x0 = static_cast<int>(std::ceil(xl));
  int x1 = static_cast<int>(std::floor(xr));
  x0 = std::max(x0, 0);
  x1 = std::min(x1, width - 1);
  return {x0, x1};
}

}  // namespace

Heatmap build_center_heatmap(const Scene& scene) {
  validate_scene(scene);
  Heatmap hm(scene.dims, 0.0f);
  for (const RasterTrack& rt : rasterize_tracks(scene)) {
    for (const auto& [y, xl] : rt.left) {
      const auto ri = rt.right.find(y);
      if (ri == rt.right.end()) continue;
      const double xr = ri->second;
      const auto [x0, x1] = covered_columns(xl, xr, scene.dims.width);
      for (int x = x0; x <= x1; ++x) {
        const float v = static_cast<float>(std::min(x - xl, xr - x));
        hm.at(x, y) = std::max(hm.at(x, y), v);
      }
    }
  }
  return hm;
}

ThreeChannelGt build_3ch_heatmaps(const Scene& scene) {
  validate_scene(scene);
  ThreeChannelGt gt{Heatmap(scene.dims, 0.0f), Heatmap(scene.dims, 0.0f),
                    Heatmap(scene.dims, 0.0f)};
  for (const RasterTrack& rt : rasterize_tracks(scene)) {
    for (const auto& [y, xl] : rt.left) {
      const auto ri = rt.right.find(y);
      if (ri == rt.right.end()) continue;
      const double xr = ri->second;
      const double width = xr - xl;
      if (width <= 0.0) continue;
      const auto [x0, x1] = covered_columns(xl, xr, scene.dims.width);
      for (int x = x0; x <= x1; ++x) {
        const double dl = x - xl;
        const double dr = xr - x;
        const float p = static_cast<float>(2.0 * std::min(dl, dr) / width);
        gt.prob.at(x, y) = std::max(gt.prob.at(x, y), p);
        // Shared pixels: the last track in id order wins.
        gt.dist_left.at(x, y) = static_cast<float>(dl);
        gt.dist_right.at(x, y) = static_cast<float>(dr);
      }
    }
  }
  return gt;
}

SegMask build_seg_mask(const Scene& scene, double rail_halfwidth) {
  validate_scene(scene);
  if (rail_halfwidth < 0.0)
    throw ValidationError("build_seg_mask: rail_halfwidth must be >= 0");
  SegMask mask(scene.dims);
  const auto tracks = rasterize_tracks(scene);

  // Rail areas first; rail-track strokes then take precedence everywhere.
  for (const RasterTrack& rt : tracks) {
    for (const auto& [y, xl] : rt.left) {
      const auto ri = rt.right.find(y);
      if (ri == rt.right.end()) continue;
      const double xr = ri->second;
      int x0 = static_cast<int>(std::floor(xl)) + 1;
      int x1 = static_cast<int>(std::ceil(xr)) - 1;
      x0 = std::max(x0, 0);
      x1 = std::min(x1, scene.dims.width - 1);
      for (int x = x0; x <= x1; ++x) {
        if (x > xl && x < xr) mask.set(x, y, SegClass::kRailArea);
      }
    }
  }
  for (const RasterTrack& rt : tracks) {
    for (const std::map<int, double>* rail : {&rt.left, &rt.right}) {
      for (const auto& [y, rx] : *rail) {
        int x0 = std::max(0, static_cast<int>(std::ceil(rx - rail_halfwidth)));
        int x1 = std::min(scene.dims.width - 1,
                          static_cast<int>(std::floor(rx + rail_halfwidth)));
        for (int x = x0; x <= x1; ++x) mask.set(x, y, SegClass::kRailTrack);
      }
    }
  }
  return mask;
}

GtBundle build_gt_bundle(const Scene& scene, double rail_halfwidth) {
  GtBundle b;
  b.center = build_center_heatmap(scene);
  ThreeChannelGt g3 = build_3ch_heatmaps(scene);
  b.prob3 = std::move(g3.prob);
  b.dist_left = std::move(g3.dist_left);
  b.dist_right = std::move(g3.dist_right);
  b.seg = build_seg_mask(scene, rail_halfwidth);
  return b;
}

}  // namespace tpe
