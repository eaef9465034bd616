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

#include "tpe/synthetic_scenes.hpp"

#include <algorithm>
#include <cmath>

#include "tpe/rng.hpp"

namespace tpe {

namespace {

// Branch lateral offset t rows above the branch point: quadratic take-off,
// then a constant-slope ramp, then parallel at full offset. The take-off is
// steep enough that twin heatmap peaks separate within a few rows but gentle
// enough for the clustering distance gates.
double branch_offset(double t, double full_offset) {
  constexpr double kQuad = 0.25;      // px per row^2
  constexpr double kSlope = 2.5;      // px per row after take-off
  constexpr double kT1 = kSlope / (2.0 * kQuad);
  constexpr double kOff1 = kQuad * kT1 * kT1;
  if (t <= 0.0) return 0.0;
  double off;
  if (t <= kT1)
    off = kQuad * t * t;
  else
    off = kOff1 + kSlope * (t - kT1);
  return std::min(off, full_offset);
}

void validate_spec(const SceneSpec& spec) {
  validate_dims(spec.dims);
  if (spec.gauge_top < 2.0)
    throw GenerationInfeasible("gauge_top must be >= 2");
  if (spec.gauge_top > spec.gauge_bottom)
    throw GenerationInfeasible("gauge_top must not exceed gauge_bottom");
  if (spec.n_switches < 0 || spec.distractor_tracks < 0)
    throw GenerationInfeasible("counts must be >= 0");
}

}  // namespace

std::vector<int> ego_track_ids(const SceneSpec& spec) {
  std::vector<int> ids(static_cast<size_t>(spec.n_switches) + 1);
  for (size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  return ids;
}

Scene generate_scene(const SceneSpec& spec) {
  validate_spec(spec);
  const int w = spec.dims.width;
  const int h = spec.dims.height;
  Pcg32 rng(spec.seed);

  auto center_trunk = [&](int y) {
    const double u = (h == 1) ? 0.0 : static_cast<double>(h - 1 - y) / (h - 1);
    return w / 2.0 + spec.curvature * u * u;
  };
  auto gauge = [&](int y) {
    const double u = (h == 1) ? 0.0 : static_cast<double>(h - 1 - y) / (h - 1);
    return spec.gauge_bottom + (spec.gauge_top - spec.gauge_bottom) * u;
  };

  // Switch rows inside the middle 60% of the image, one per disjoint window
  // so branches never collide.
  std::vector<int> switch_rows;
  for (int k = 0; k < spec.n_switches; ++k) {
    const double w_lo = 0.25 + 0.5 * k / std::max(1, spec.n_switches);
    const double w_hi = 0.25 + 0.5 * (k + 1) / std::max(1, spec.n_switches);
    const double u_sw = rng.uniform(w_lo + 0.05, w_hi - 0.05);
    switch_rows.push_back(static_cast<int>(std::lround((h - 1) * (1.0 - u_sw))));
  }

  const double full_offset = 0.12 * w;

  Scene scene;
  scene.dims = spec.dims;

  auto add_track = [&](int id, auto center_fn) {
    Track t;
    t.id = id;
    for (int y = h - 1; y >= 0; --y) {
      const double c = center_fn(y);
      const double half = gauge(y) / 2.0;
      const double xl = c - half;
      const double xr = c + half;
      if (xl < 0.0 || xr >= w)
        throw GenerationInfeasible("track " + std::to_string(id) +
                                   " does not fit inside the image");
      t.left.points.push_back({xl, static_cast<double>(y)});
      t.right.points.push_back({xr, static_cast<double>(y)});
    }
    scene.tracks.push_back(std::move(t));
  };

  // Ego trunk.
  add_track(0, center_trunk);

  // Diverging branch routes; directions alternate.
  for (int k = 0; k < spec.n_switches; ++k) {
    const int y_sw = switch_rows[k];
    const double dir = (k % 2 == 0) ? 1.0 : -1.0;
    add_track(k + 1, [&, y_sw, dir](int y) {
      const double t = static_cast<double>(y_sw - y);
      return center_trunk(y) + dir * branch_offset(t, full_offset);
    });
  }

  // Distractor tracks: parallel, far from the bottom center.
  for (int j = 0; j < spec.distractor_tracks; ++j) {
    const double dir = (j % 2 == 0) ? 1.0 : -1.0;
    const double off = (0.33 + 0.12 * (j / 2)) * w;
    add_track(spec.n_switches + 1 + j,
              [&, dir, off](int y) { return center_trunk(y) + dir * off; });
  }

  validate_scene(scene);
  return scene;
}

Scene generate_scene_integer_columns(const SceneSpec& spec) {
  Scene scene = generate_scene(spec);
  for (Track& t : scene.tracks) {
    for (RailPolyline* poly : {&t.left, &t.right})
      for (PolyPoint& p : poly->points) p.x = std::floor(p.x + 0.5);
  }
  validate_scene(scene);
  return scene;
}

std::vector<EgoPath> ground_truth_paths(const Scene& scene,
                                        const std::vector<int>& track_ids) {
  std::vector<EgoPath> paths;
  for (int id : track_ids) {
    const auto it = std::find_if(scene.tracks.begin(), scene.tracks.end(),
                                 [id](const Track& t) { return t.id == id; });
    if (it == scene.tracks.end())
      throw ValidationError("ground_truth_paths: no track with id " + std::to_string(id));
    const auto left = rasterize_polyline(it->left, scene.dims);
    const auto right = rasterize_polyline(it->right, scene.dims);
    EgoPath p;
    for (auto ri = left.rbegin(); ri != left.rend(); ++ri) {  // bottom-up
      const auto rr = right.find(ri->first);
      if (rr == right.end()) continue;
      Triplet t;
      t.y = ri->first;
      t.x_left = ri->second;
      t.x_right = rr->second;
      t.x_center = (t.x_left + t.x_right) / 2.0;
      p.triplets.push_back(t);
    }
    if (!p.triplets.empty()) paths.push_back(std::move(p));
  }
  return paths;
}

Heatmap perturb_heatmap(const Heatmap& hm, const NoiseSpec& noise, uint64_t seed) {
  if (noise.value_sigma < 0.0 || noise.jitter_sigma < 0.0 || noise.dropout_rows < 0.0 ||
      noise.dropout_rows > 1.0)
    throw ValidationError("perturb_heatmap: invalid NoiseSpec");
  Pcg32 rng(seed);
  const int w = hm.width();
  const int h = hm.height();
  Heatmap out(hm.dims(), 0.0f);
  for (int y = 0; y < h; ++y) {
    int shift = 0;
    if (noise.jitter_sigma > 0.0)
      shift = static_cast<int>(std::lround(rng.gaussian() * noise.jitter_sigma));
    const float* src = hm.row(y);
    float* dst = out.row(y);
    for (int x = 0; x < w; ++x) {
      const int sx = x - shift;
      dst[x] = (sx >= 0 && sx < w) ? src[sx] : 0.0f;
    }
    if (noise.value_sigma > 0.0) {
      for (int x = 0; x < w; ++x) {
        dst[x] = std::max(
            0.0f, dst[x] + static_cast<float>(rng.gaussian() * noise.value_sigma));
      }
    }
    if (noise.dropout_rows > 0.0 && rng.next_double() < noise.dropout_rows) {
      std::fill(dst, dst + w, 0.0f);
    }
  }
  return out;
}

}  // namespace tpe
