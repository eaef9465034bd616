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

struct MatchConfig {
  double radius = 5.0;  // vicinity for pixel matching (Chebyshev), pixels
  double m_min = 0.5;   // minimum F1 for path pairing
};

struct MatchStats {
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 0.0;
};

/// Fills the ratio fields from the counts: 0/0 ratios are 1 by convention,
/// f1 is 0 when precision + recall is 0.
MatchStats finalize_stats(long long tp, long long fp, long long fn);

struct PathPair {
  int gt_index = 0;
  int est_index = 0;
  MatchStats stats;
};

struct PathMatching {
  std::vector<PathPair> pairs;
  std::vector<int> unmatched_gt;
  std::vector<int> unmatched_est;
};

enum class PixelLevelMode { kTpPixel, kAllPixel };

/// Pixel-level F1 between two paths: a GT rail pixel matches when an
/// estimated pixel of the same side lies within Chebyshev distance r, each
/// estimated pixel used at most once (maximum bipartite matching, so the
/// count is symmetric in gt/est).
MatchStats rail_pixel_f1(const EgoPath& gt, const EgoPath& est, double radius);

/// Greedy one-to-one path pairing by descending F1, keeping pairs with
/// F1 >= m_min. Ties: lower gt index, then lower est index.
PathMatching match_paths(const std::vector<EgoPath>& gt, const std::vector<EgoPath>& est,
                         const MatchConfig& cfg);

/// Aggregates pixel counts over matched pairs; kAllPixel additionally counts
/// unmatched GT rail pixels as FN and unmatched estimated ones as FP.
MatchStats pixel_level_metrics(const PathMatching& matching, const std::vector<EgoPath>& gt,
                               const std::vector<EgoPath>& est, PixelLevelMode mode);

/// TP = matched pairs, FN = unmatched GT paths, FP = unmatched estimated.
MatchStats path_level_metrics(const PathMatching& matching);

/// Mean IoU over classes present in gt or pred.
double miou(const SegMask& pred, const SegMask& gt, int n_classes);

/// Number of rail pixels (left + right) a path contributes to the metrics.
long long path_rail_pixel_count(const EgoPath& path);

}  // namespace tpe
