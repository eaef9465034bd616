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

#include "tpe/segment_clustering.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace tpe {

std::vector<SubregionSpec> partition_rows(const GridDims& dims, int h) {
  validate_dims(dims);
  if (h < 1 || h > dims.height)
    throw ValidationError("partition_rows: h must be in [1, H]");
  std::vector<SubregionSpec> out;
  int index = 0;
  for (int y_bottom = dims.height - 1; y_bottom >= 0; y_bottom -= h) {
    SubregionSpec s;
    s.index = index++;
    s.y_bottom = y_bottom;
    s.y_top = std::max(0, y_bottom - h + 1);
    out.push_back(s);
  }
  return out;
}

std::vector<std::vector<TrackSegment>> cluster_into_segments(
    const std::vector<Triplet>& triplets, const ClusterConfig& cfg, const GridDims& dims) {
  if (cfg.tau_point <= 0.0)
    throw ValidationError("cluster_into_segments: tau_point must be > 0");
  const auto subregions = partition_rows(dims, cfg.subregion_height);

  // Bucket triplets per sub-region, then per row.
  std::vector<std::map<int, std::vector<Triplet>>> rows_per_region(subregions.size());
  for (const Triplet& t : triplets) {
    if (t.y < 0 || t.y >= dims.height)
      throw ValidationError("cluster_into_segments: triplet row out of range");
    const int region = (dims.height - 1 - t.y) / cfg.subregion_height;
    rows_per_region[region][t.y].push_back(t);
  }

  std::vector<std::vector<TrackSegment>> result(subregions.size());
  for (size_t region = 0; region < subregions.size(); ++region) {
    std::vector<TrackSegment>& segments = result[region];

    // Rows bottom-up: largest y first.
    auto& rows = rows_per_region[region];
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
      std::vector<Triplet>& pts = it->second;
      std::sort(pts.begin(), pts.end(),
                [](const Triplet& a, const Triplet& b) { return a.x_center < b.x_center; });

      struct Candidate {
        double dist;
        size_t seg;
        size_t pt;
      };
      std::vector<Candidate> cands;
      for (size_t p = 0; p < pts.size(); ++p) {
        for (size_t s = 0; s < segments.size(); ++s) {
          const double d = std::abs(pts[p].x_center - segments[s].top().x_center);
          if (d <= cfg.tau_point) cands.push_back({d, s, p});
        }
      }
      std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        if (a.seg != b.seg) return a.seg < b.seg;
        return a.pt < b.pt;
      });

      std::vector<bool> seg_taken(segments.size(), false);
      std::vector<bool> pt_done(pts.size(), false);
      for (const Candidate& c : cands) {
        if (seg_taken[c.seg] || pt_done[c.pt]) continue;
        segments[c.seg].triplets.push_back(pts[c.pt]);
        seg_taken[c.seg] = true;
        pt_done[c.pt] = true;
      }
      for (size_t p = 0; p < pts.size(); ++p) {
        if (pt_done[p]) continue;
        TrackSegment seg;
        seg.subregion = static_cast<int>(region);
        seg.triplets.push_back(pts[p]);
        segments.push_back(std::move(seg));
      }
    }
  }
  return result;
}

}  // namespace tpe
