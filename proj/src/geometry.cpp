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

#include "tpe/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace tpe {

void validate_polyline(const RailPolyline& poly, const std::string& what) {
  if (poly.points.size() < 2)
    throw ValidationError(what + ": polyline needs at least 2 points");
  const bool ascending = poly.points[1].y > poly.points[0].y;
  for (size_t i = 0; i + 1 < poly.points.size(); ++i) {
    const double dy = poly.points[i + 1].y - poly.points[i].y;
    if (!std::isfinite(poly.points[i].x) || !std::isfinite(poly.points[i].y))
      throw ValidationError(what + ": non-finite point");
    if ((ascending && dy <= 0.0) || (!ascending && dy >= 0.0))
      throw ValidationError(what + ": y must be strictly monotone");
  }
}

std::map<int, double> rasterize_polyline(const RailPolyline& poly, const GridDims& dims) {
  validate_polyline(poly, "rasterize_polyline");
  std::map<int, double> out;

  // Normalize to ascending y.
  std::vector<PolyPoint> pts = poly.points;
  if (pts.front().y > pts.back().y) std::reverse(pts.begin(), pts.end());

  const double y_lo = pts.front().y;
  const double y_hi = pts.back().y;
  const int row_lo = std::max(0, static_cast<int>(std::ceil(y_lo)));
  const int row_hi = std::min(dims.height - 1, static_cast<int>(std::floor(y_hi)));
  if (row_lo > row_hi) return out;

  size_t seg = 0;
  for (int y = row_lo; y <= row_hi; ++y) {
    while (seg + 2 < pts.size() && pts[seg + 1].y < static_cast<double>(y)) ++seg;
    const PolyPoint& a = pts[seg];
    const PolyPoint& b = pts[seg + 1];
    const double t = (b.y == a.y) ? 0.0 : (static_cast<double>(y) - a.y) / (b.y - a.y);
    out[y] = a.x + t * (b.x - a.x);
  }
  return out;
}

std::optional<std::pair<double, double>> rail_row_span(const Track& track, int y,
                                                       const GridDims& dims) {
  const auto left = rasterize_polyline(track.left, dims);
  const auto right = rasterize_polyline(track.right, dims);
  const auto li = left.find(y);
  const auto ri = right.find(y);
  if (li == left.end() || ri == right.end()) return std::nullopt;
  return std::make_pair(li->second, ri->second);
}

void validate_track(const Track& track, const GridDims& dims) {
  const std::string tag = "track " + std::to_string(track.id);
  validate_polyline(track.left, tag + " left rail");
  validate_polyline(track.right, tag + " right rail");
  const auto left = rasterize_polyline(track.left, dims);
  const auto right = rasterize_polyline(track.right, dims);
  for (const auto& [y, xl] : left) {
    const auto ri = right.find(y);
    if (ri == right.end()) continue;
    if (!(xl < ri->second))
      throw ValidationError(tag + ": left rail x >= right rail x at row " +
                            std::to_string(y));
  }
}

void validate_scene(const Scene& scene) {
  validate_dims(scene.dims);
  std::set<int> ids;
  for (const Track& t : scene.tracks) {
    if (!ids.insert(t.id).second)
      throw ValidationError("scene: duplicate track id " + std::to_string(t.id));
    for (const RailPolyline* poly : {&t.left, &t.right}) {
      for (const PolyPoint& p : poly->points) {
        if (p.x < 0.0 || p.x >= scene.dims.width || p.y < 0.0 || p.y >= scene.dims.height)
          throw ValidationError("scene: track " + std::to_string(t.id) +
                                " has a point outside the image");
      }
    }
    validate_track(t, scene.dims);
  }
}

}  // namespace tpe
