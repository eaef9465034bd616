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
//
// The deterministic end-to-end fixture behind the golden files. io_test and
// the acceptance suite must build bit-identical bytes from it, so everything
// lives here.

#pragma once

#include "tpe/gt_synthesis.hpp"
#include "tpe/io.hpp"
#include "tpe/pipeline.hpp"
#include "tpe/synthetic_scenes.hpp"

namespace tpe::test {

struct GoldenFixture {
  Scene scene;
  Heatmap center;
  SegMask seg;
  PathsDocument doc;
  MetricsReport report;
};

inline GoldenFixture make_golden_fixture() {
  SceneSpec spec;
  spec.dims = {96, 64};
  spec.n_switches = 1;
  spec.curvature = 6.0;
  spec.gauge_bottom = 12.0;
  spec.gauge_top = 6.0;
  spec.distractor_tracks = 1;
  spec.seed = 42;

  GoldenFixture f;
  f.scene = generate_scene_integer_columns(spec);
  f.center = build_center_heatmap(f.scene);
  f.seg = build_seg_mask(f.scene, 1.0);

  const PipelineConfig cfg;  // 960-width defaults, fine for this fixture
  const PipelineResult result = run_pipeline_1ch(f.center, cfg);
  f.doc = {f.scene.dims, cfg, result.tree, result.paths, result.fits};

  const auto gt_paths = ground_truth_paths(f.scene, ego_track_ids(spec));
  const PathMatching matching = match_paths(gt_paths, result.paths, cfg.match);
  ImageMetrics im;
  im.name = "fixture_42";
  im.tp_pixel =
      pixel_level_metrics(matching, gt_paths, result.paths, PixelLevelMode::kTpPixel);
  im.all_pixel =
      pixel_level_metrics(matching, gt_paths, result.paths, PixelLevelMode::kAllPixel);
  im.path_level = path_level_metrics(matching);
  im.matched_pairs = static_cast<int>(matching.pairs.size());
  im.miou = miou(f.seg, f.seg, 3);
  f.report.config = cfg.match;
  f.report.per_image.push_back(im);
  return f;
}

}  // namespace tpe::test
