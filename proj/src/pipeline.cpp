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

#include "tpe/pipeline.hpp"

namespace tpe {

PipelineResult run_pipeline_on_triplets(std::vector<Triplet> triplets,
                                        const PipelineConfig& cfg, const GridDims& dims,
                                        const SegMask* seg, const Heatmap* rail_prob) {
  PipelineResult res;
  res.triplets = std::move(triplets);
  const auto segments = cluster_into_segments(res.triplets, cfg.cluster, dims);
  res.tree = build_path_tree(segments, cfg.tree, dims, cfg.cluster.subregion_height);
  res.paths = filter_paths(enumerate_ego_paths(res.tree), cfg.tree, dims);
  if (seg != nullptr) {
    for (EgoPath& p : res.paths) p = snap_to_segmentation(p, *seg, cfg.snap, rail_prob);
  }
  for (const EgoPath& p : res.paths) {
    if (static_cast<int>(p.triplets.size()) >= 2)
      res.fits.push_back(fit_rail_polynomials(p, cfg.fit_degree));
  }
  return res;
}

PipelineResult run_pipeline_1ch(const Heatmap& center_hm, const PipelineConfig& cfg,
                                const SegMask* seg, const Heatmap* rail_prob) {
  return run_pipeline_on_triplets(extract_triplets_1ch(center_hm, cfg.peak), cfg,
                                  center_hm.dims(), seg, rail_prob);
}

PipelineResult run_pipeline_3ch(const Heatmap& prob, const Heatmap& dist_left,
                                const Heatmap& dist_right, const PipelineConfig& cfg,
                                const SegMask* seg, const Heatmap* rail_prob) {
  return run_pipeline_on_triplets(extract_triplets_3ch(prob, dist_left, dist_right, cfg.peak),
                                  cfg, prob.dims(), seg, rail_prob);
}

}  // namespace tpe
