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

namespace tpe {

struct PeakConfig {
  int nms_radius = 2;        // rho, pixels
  double min_peak_value = 1.0;  // half-widths below this are noise (1-channel);
                                // probability threshold in the 3-channel decoder
};

struct Peak {
  int y = 0;
  int x = 0;
  float value = 0.0f;
  bool operator==(const Peak&) const = default;
};

/// Row-wise 1D non-maximum suppression. A column qualifies when its value is
/// >= min_peak_value, strictly greater than every value within nms_radius to
/// its left and >= every value within nms_radius to its right (so plateaus
/// and exact ties keep only the leftmost column). Output sorted by x.
std::vector<Peak> detect_row_peaks(const Heatmap& hm, int y, const PeakConfig& cfg);

/// 1-channel decoder: each peak (x, v) becomes Triplet(y, x - v, x, x + v).
/// Rail positions outside the image are clamped and flagged.
std::vector<Triplet> extract_triplets_1ch(const Heatmap& center_hm, const PeakConfig& cfg);

/// 3-channel decoder: probability peaks give the track points; left/right
/// distances are read from the distance maps at the peak location.
std::vector<Triplet> extract_triplets_3ch(const Heatmap& prob, const Heatmap& dist_left,
                                          const Heatmap& dist_right, const PeakConfig& cfg);

}  // namespace tpe
