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

#include "tpe/path_tree.hpp"

namespace tpe {

struct SnapConfig {
  int w_snap = 10;                   // horizontal search window, pixels
  bool enforce_monotone_width = true;  // widths may not grow in the far direction
};

/// Polynomial fit of x as a function of y for both rails of one path.
struct FittedPath {
  std::vector<double> left_coeffs;   // ascending powers of y
  std::vector<double> right_coeffs;
  int degree = 0;
  double y_min = 0.0;
  double y_max = 0.0;
};

/// Moves each rail position to the nearest rail-track column within +-w_snap.
/// A move is rejected when it would grow the rail-area width relative to the
/// row below (perspective monotonicity) or violate x_left <= x_right. The
/// optional probability grid breaks equal-distance ties toward the higher
/// probability column.
EgoPath snap_to_segmentation(const EgoPath& path, const SegMask& seg, const SnapConfig& cfg,
                             const Heatmap* rail_prob = nullptr);

/// Least-squares fit of each rail, degree reduced on rank deficiency.
FittedPath fit_rail_polynomials(const EgoPath& path, int degree);

double eval_polynomial(const std::vector<double>& coeffs, double y);

}  // namespace tpe
