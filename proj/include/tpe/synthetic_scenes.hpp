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

#include "tpe/geometry.hpp"
#include "tpe/path_tree.hpp"

namespace tpe {

class GenerationInfeasible : public std::runtime_error {
 public:
  explicit GenerationInfeasible(const std::string& msg) : std::runtime_error(msg) {}
};

struct SceneSpec {
  GridDims dims{960, 540};
  int n_switches = 0;
  double curvature = 0.0;     // lateral deflection of the center line at the
                              // top of the image, pixels
  double gauge_bottom = 60.0; // rail-area width at the image bottom, pixels
  double gauge_top = 24.0;    // rail-area width at the top (< gauge_bottom)
  int distractor_tracks = 0;  // parallel non-ego tracks
  uint64_t seed = 0;
};

struct NoiseSpec {
  double value_sigma = 0.0;   // additive Gaussian noise on heatmap values
  double jitter_sigma = 0.0;  // horizontal jitter of each row's pattern, pixels
  double dropout_rows = 0.0;  // fraction of rows zeroed
};

/// Deterministic-in-seed scene: one ego track from the bottom center plus
/// n_switches diverging branch tracks (each a full Track sharing the trunk
/// rails below its branch point) and distractor tracks whose bottom centers
/// sit at least 0.3*W from the bottom center. Track ids 0..n_switches are the
/// ego routes, higher ids are distractors.
Scene generate_scene(const SceneSpec& spec);

/// Variant with all rail columns rounded to integers (re-validated), for
/// bit-exact oracle comparisons.
Scene generate_scene_integer_columns(const SceneSpec& spec);

/// Ids of the tracks that are legitimate ego routes for a spec-built scene.
std::vector<int> ego_track_ids(const SceneSpec& spec);

/// Ground-truth ego-paths: one EgoPath per listed track, a triplet per
/// covered row, ordered bottom-up.
std::vector<EgoPath> ground_truth_paths(const Scene& scene, const std::vector<int>& track_ids);

/// Deterministic-in-seed corruption: per-row horizontal jitter of the ramp
/// pattern, additive Gaussian value noise clamped at 0, then row dropout.
Heatmap perturb_heatmap(const Heatmap& hm, const NoiseSpec& noise, uint64_t seed);

}  // namespace tpe
