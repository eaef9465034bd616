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

/// Everything the training side consumes for one annotated scene: the
/// 1-channel center/half-width map, the 3-channel design (probability plus
/// left/right distance maps), and the 3-class segmentation mask.
struct GtBundle {
  Heatmap center;
  Heatmap prob3;
  Heatmap dist_left;
  Heatmap dist_right;
  SegMask seg;
};

/// 1-channel ground truth: each rail-area pixel holds
/// max over covering tracks of min(distance to left rail, distance to right
/// rail); pixels covered by no rail area are 0. Per row and track the maximum
/// sits at the track center.
Heatmap build_center_heatmap(const Scene& scene);

struct ThreeChannelGt {
  Heatmap prob;
  Heatmap dist_left;
  Heatmap dist_right;
};

/// 3-channel ground truth. Probability ramps 0 -> 1 from each rail to the
/// track center and shared pixels take the per-track maximum. Distance maps
/// ramp 0 -> rail-area width; shared pixels keep the value of the last track
/// in ascending id order, which is exactly the ambiguity that makes this
/// design unreliable in switch regions.
ThreeChannelGt build_3ch_heatmaps(const Scene& scene);

/// 3-class mask: columns within rail_halfwidth of a rasterized rail are
/// rail-track, remaining columns strictly between a track's rails are
/// rail-area, everything else background.
SegMask build_seg_mask(const Scene& scene, double rail_halfwidth);

GtBundle build_gt_bundle(const Scene& scene, double rail_halfwidth);

}  // namespace tpe
