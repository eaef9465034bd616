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

#include "tpe/evaluation.hpp"
#include "tpe/refinement.hpp"
#include "tpe/triplet_extraction.hpp"

namespace tpe {

/// Union of every stage's knobs. Defaults are stated for 540x960; tau_point
/// and the match radius scale proportionally with the image width.
struct PipelineConfig {
  PeakConfig peak;
  ClusterConfig cluster;
  TreeConfig tree;
  SnapConfig snap;
  MatchConfig match;
  int fit_degree = 3;

  static PipelineConfig defaults_for(const GridDims& dims) {
    PipelineConfig cfg;
    const double scale = dims.width / 960.0;
    cfg.cluster.tau_point = 8.0 * scale;
    cfg.match.radius = 5.0 * scale;
    return cfg;
  }
};

struct PipelineResult {
  std::vector<Triplet> triplets;
  PathTree tree;
  std::vector<EgoPath> paths;            // filtered, snapped if a mask was given
  std::vector<FittedPath> fits;          // one per path when fitting succeeded
};

/// Full post-processing chain on a 1-channel regression heatmap:
/// extract -> cluster -> tree -> enumerate -> filter [-> snap] -> fit.
PipelineResult run_pipeline_1ch(const Heatmap& center_hm, const PipelineConfig& cfg,
                                const SegMask* seg = nullptr,
                                const Heatmap* rail_prob = nullptr);

/// Same chain for the 3-channel design.
PipelineResult run_pipeline_3ch(const Heatmap& prob, const Heatmap& dist_left,
                                const Heatmap& dist_right, const PipelineConfig& cfg,
                                const SegMask* seg = nullptr,
                                const Heatmap* rail_prob = nullptr);

/// Shared tail of both pipelines, exposed for benchmarking and tests.
PipelineResult run_pipeline_on_triplets(std::vector<Triplet> triplets,
                                        const PipelineConfig& cfg, const GridDims& dims,
                                        const SegMask* seg, const Heatmap* rail_prob);

}  // namespace tpe
