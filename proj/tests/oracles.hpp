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
//
// Independent brute-force oracles used by the unit and acceptance suites.
// These deliberately avoid the library's rasterization/accumulation code
// paths: everything is computed pixel by pixel from first principles.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "tpe/geometry.hpp"
#include "tpe/losses.hpp"

namespace tpe::oracle {

// Straight-line interpolation of a polyline at row y, done segment by
// segment without the library's row sweep.
inline std::optional<double> polyline_x_at(const RailPolyline& poly, double y) {
  for (size_t i = 0; i + 1 < poly.points.size(); ++i) {
    PolyPoint a = poly.points[i];
    PolyPoint b = poly.points[i + 1];
    if (a.y > b.y) std::swap(a, b);
    if (y < a.y || y > b.y) continue;
    const double t = (b.y == a.y) ? 0.0 : (y - a.y) / (b.y - a.y);
    return a.x + t * (b.x - a.x);
  }
  return std::nullopt;
}

// Per-pixel evaluation of the 1-channel ground-truth rule: the maximum over
// covering rail areas of min(distance to left rail, distance to right rail).
inline float center_value_at(const Scene& scene, int x, int y) {
  float best = 0.0f;
  for (const Track& t : scene.tracks) {
    const auto xl = polyline_x_at(t.left, y);
    const auto xr = polyline_x_at(t.right, y);
    if (!xl || !xr) continue;
    if (x < *xl || x > *xr) continue;
    best = std::max(best, static_cast<float>(std::min(x - *xl, *xr - x)));
  }
  return best;
}

// Sort-and-select reference for the bootstrapped cross entropy.
inline double bootstrapped_ce_sorted(std::vector<float> losses, double t_k, long long k) {
  std::sort(losses.begin(), losses.end(), std::greater<float>());
  long long above = 0;
  while (above < static_cast<long long>(losses.size()) && losses[above] > t_k) ++above;
  double sum = 0.0;
  if (above >= k) {
    for (long long i = 0; i < above; ++i) sum += losses[i];
  } else {
    const float kth = losses[k - 1];
    for (float f : losses) {
      if (f >= kth) sum += f;
    }
  }
  return sum / static_cast<double>(k);
}

}  // namespace tpe::oracle
