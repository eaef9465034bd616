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

/// One full-width horizontal band. Sub-regions partition [0, H); index 0 is
/// the bottom-most band and the top-most band may be shorter.
struct SubregionSpec {
  int index = 0;
  int y_top = 0;     // smallest row in the band
  int y_bottom = 0;  // largest row in the band
  bool operator==(const SubregionSpec&) const = default;
};

/// Chain of track points inside one sub-region, ordered bottom-up (descending
/// y), at most one triplet per row.
struct TrackSegment {
  int subregion = 0;
  std::vector<Triplet> triplets;

  const Triplet& bottom() const { return triplets.front(); }
  const Triplet& top() const { return triplets.back(); }
};

struct ClusterConfig {
  int subregion_height = 10;  // h, pixels
  double tau_point = 8.0;     // max |delta x_center| for point-to-segment association
};

/// ceil(H/h) bands, bottom-most first.
std::vector<SubregionSpec> partition_rows(const GridDims& dims, int h);

/// Greedy bottom-up row scan per sub-region. A point joins the open segment
/// whose last x_center is nearest within tau_point (ties: earliest-created
/// segment, then leftmost point); a segment absorbs at most one point per
/// row; everything else starts a new segment.
std::vector<std::vector<TrackSegment>> cluster_into_segments(
    const std::vector<Triplet>& triplets, const ClusterConfig& cfg, const GridDims& dims);

}  // namespace tpe
