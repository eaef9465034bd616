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

#include "tpe/triplet_extraction.hpp"

#include <algorithm>
#include <cmath>

namespace tpe {

std::vector<Peak> detect_row_peaks(const Heatmap& hm, int y, const PeakConfig& cfg) {
  if (y < 0 || y >= hm.height())
    throw ValidationError("detect_row_peaks: row out of range");
  if (cfg.nms_radius < 1)
    throw ValidationError("detect_row_peaks: nms_radius must be >= 1");

  const float* row = hm.row(y);
  const int w = hm.width();
  std::vector<Peak> peaks;
  for (int x = 0; x < w; ++x) {
    const float v = row[x];
    if (v < cfg.min_peak_value) continue;
    bool ok = true;
    for (int d = 1; d <= cfg.nms_radius && ok; ++d) {
      if (x - d >= 0 && row[x - d] >= v) ok = false;  // ties resolve left
      if (x + d < w && row[x + d] > v) ok = false;
    }
    if (ok) peaks.push_back(Peak{y, x, v});
  }
  return peaks;
}

namespace {

Triplet make_clamped(int y, double xl, double xc, double xr, TripletMode mode, int width) {
  Triplet t;
  t.y = y;
  t.mode = mode;
  t.x_center = xc;
  t.x_left = xl;
  t.x_right = xr;
  if (t.x_left < 0.0) {
    t.x_left = 0.0;
    t.clamped = true;
  }
  if (t.x_right > width - 1.0) {
    t.x_right = width - 1.0;
    t.clamped = true;
  }
  return t;
}

}  // namespace

std::vector<Triplet> extract_triplets_1ch(const Heatmap& center_hm, const PeakConfig& cfg) {
  std::vector<Triplet> out;
  for (int y = 0; y < center_hm.height(); ++y) {
    for (const Peak& p : detect_row_peaks(center_hm, y, cfg)) {
      const double v = p.value;
      out.push_back(make_clamped(y, p.x - v, p.x, p.x + v, TripletMode::kOneChannel,
                                 center_hm.width()));
    }
  }
  return out;
}

std::vector<Triplet> extract_triplets_3ch(const Heatmap& prob, const Heatmap& dist_left,
                                          const Heatmap& dist_right, const PeakConfig& cfg) {
  if (!(prob.dims() == dist_left.dims()) || !(prob.dims() == dist_right.dims()))
    throw ValidationError("extract_triplets_3ch: grid dims mismatch");
  std::vector<Triplet> out;
  for (int y = 0; y < prob.height(); ++y) {
    for (const Peak& p : detect_row_peaks(prob, y, cfg)) {
      const double dl = std::max(0.0f, dist_left.at(p.x, y));
      const double dr = std::max(0.0f, dist_right.at(p.x, y));
      out.push_back(make_clamped(y, p.x - dl, p.x, p.x + dr, TripletMode::kThreeChannel,
                                 prob.width()));
    }
  }
  return out;
}

}  // namespace tpe
