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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <functional>
#include <mutex>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "tpe/gt_synthesis.hpp"
#include "tpe/io.hpp"
#include "tpe/render.hpp"
#include "tpe/synthetic_scenes.hpp"

namespace {

using namespace tpe;

struct ConfigFlags {
  std::string config_file;
  PipelineConfig apply(const GridDims& dims, const CLI::App* cmd) const {
    PipelineConfig cfg = PipelineConfig::defaults_for(dims);
    if (!config_file.empty()) {
      const auto j = nlohmann::json::parse(read_file(config_file), nullptr, false);
      if (j.is_discarded()) throw ValidationError("config file: malformed JSON");
      // Reuse the paths-document config schema.
      PathsDocument tmp;
      tmp.config = decode_paths_document(
                       nlohmann::json({{"width", dims.width},
                                       {"height", dims.height},
                                       {"config", j},
                                       {"tree", {{"nodes", nlohmann::json::array()},
                                                 {"edges", nlohmann::json::array()}}},
                                       {"paths", nlohmann::json::array()},
                                       {"fits", nlohmann::json::array()}})
                           .dump())
                       .config;
      cfg = tmp.config;
    }
    // Flags win over the config file.
    auto override_int = [&](const char* name, int& dst) {
      if (cmd->count(name)) dst = cmd->get_option(name)->as<int>();
    };
    auto override_dbl = [&](const char* name, double& dst) {
      if (cmd->count(name)) dst = cmd->get_option(name)->as<double>();
    };
    override_int("--nms-radius", cfg.peak.nms_radius);
    override_dbl("--min-peak-value", cfg.peak.min_peak_value);
    override_int("--subregion-height", cfg.cluster.subregion_height);
    override_dbl("--tau-point", cfg.cluster.tau_point);
    override_dbl("--tau-seg", cfg.tree.tau_seg);
    override_dbl("--tau-start", cfg.tree.tau_start);
    override_int("--filter-min-rows", cfg.tree.filter_min_rows);
    override_dbl("--filter-min-extent", cfg.tree.filter_min_extent);
    override_int("--w-snap", cfg.snap.w_snap);
    override_dbl("--match-radius", cfg.match.radius);
    override_dbl("--m-min", cfg.match.m_min);
    override_int("--fit-degree", cfg.fit_degree);
    return cfg;
  }
};

void add_config_flags(CLI::App* cmd, ConfigFlags& flags) {
  cmd->add_option("--config", flags.config_file, "JSON config file (flags win)");
  cmd->add_option("--nms-radius", "NMS radius, px");
  cmd->add_option("--min-peak-value", "minimum peak value / probability");
  cmd->add_option("--subregion-height", "sub-region height h, px");
  cmd->add_option("--tau-point", "point-to-segment association distance, px");
  cmd->add_option("--tau-seg", "segment-to-edge association distance, px");
  cmd->add_option("--tau-start", "start node association distance, px (0 = W/4)");
  cmd->add_option("--filter-min-rows", "minimum triplets per kept path");
  cmd->add_option("--filter-min-extent", "minimum vertical extent, fraction of H");
  cmd->add_option("--w-snap", "segmentation snap window, px");
  cmd->add_option("--match-radius", "pixel match vicinity, px");
  cmd->add_option("--m-min", "minimum matching rate for path pairing");
  cmd->add_option("--fit-degree", "polynomial fit degree");
}

void run_parallel(size_t count, int jobs, const std::function<void(size_t)>& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || count <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  std::atomic<bool> failed{false};
  std::string error;
  std::mutex error_mutex;
  for (int t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < count; i = next++) {
        if (failed) return;
        try {
          fn(i);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(error_mutex);
          failed = true;
          error = e.what();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failed) throw ValidationError(error);
}

// Ground-truth ego-paths for evaluation: feed the annotated rail coordinates
// through the same post-processing, which keeps only the possible ego-paths.
std::vector<EgoPath> gt_paths_via_postprocessing(const Scene& scene,
                                                 const PipelineConfig& cfg) {
  std::map<int, std::vector<Triplet>> rows;
  for (const Track& t : scene.tracks) {
    const auto left = rasterize_polyline(t.left, scene.dims);
    const auto right = rasterize_polyline(t.right, scene.dims);
    for (const auto& [y, xl] : left) {
      const auto ri = right.find(y);
      if (ri == right.end()) continue;
      Triplet tr;
      tr.y = y;
      tr.x_left = xl;
      tr.x_right = ri->second;
      tr.x_center = (xl + ri->second) / 2.0;
      rows[y].push_back(tr);
    }
  }
  // Tracks that share rails below a switch yield coincident track points;
  // collapse them per row the way NMS does on the estimated side.
  std::vector<Triplet> triplets;
  const double min_sep = cfg.peak.nms_radius;
  for (auto& [y, pts] : rows) {
    std::sort(pts.begin(), pts.end(),
              [](const Triplet& a, const Triplet& b) { return a.x_center < b.x_center; });
    for (const Triplet& tr : pts) {
      if (!triplets.empty() && triplets.back().y == y &&
          tr.x_center - triplets.back().x_center < min_sep)
        continue;
      triplets.push_back(tr);
    }
  }
  return run_pipeline_on_triplets(std::move(triplets), cfg, scene.dims, nullptr, nullptr)
      .paths;
}

int cmd_synth(const SceneSpec& spec, const NoiseSpec& noise, uint64_t noise_seed,
              double rail_halfwidth, const std::string& out_dir) {
  const Scene scene = generate_scene(spec);
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  save_scene(scene, dir / "scene.json");
  GtBundle gt = build_gt_bundle(scene, rail_halfwidth);
  const bool noisy =
      noise.value_sigma > 0.0 || noise.jitter_sigma > 0.0 || noise.dropout_rows > 0.0;
  if (noisy) {
    gt.center = perturb_heatmap(gt.center, noise, noise_seed);
    gt.prob3 = perturb_heatmap(gt.prob3, noise, noise_seed + 1);
  }
  save_heatmap(gt.center, dir / "center.tpeh");
  save_heatmap(gt.prob3, dir / "prob.tpeh");
  save_heatmap(gt.dist_left, dir / "dist_left.tpeh");
  save_heatmap(gt.dist_right, dir / "dist_right.tpeh");
  save_seg_mask(gt.seg, dir / "seg.tpes");
  return 0;
}

int cmd_gtgen(const std::string& scene_path, double rail_halfwidth,
              const std::string& out_dir) {
  const Scene scene = load_scene(scene_path);
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  const GtBundle gt = build_gt_bundle(scene, rail_halfwidth);
  save_heatmap(gt.center, dir / "center.tpeh");
  save_heatmap(gt.prob3, dir / "prob.tpeh");
  save_heatmap(gt.dist_left, dir / "dist_left.tpeh");
  save_heatmap(gt.dist_right, dir / "dist_right.tpeh");
  save_seg_mask(gt.seg, dir / "seg.tpes");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TPE rail ego-path extraction pipeline"};
  app.require_subcommand(1);

  // ---- synth ----
  SceneSpec spec;
  NoiseSpec noise;
  uint64_t noise_seed = 1;
  double rail_halfwidth = 1.0;
  std::string out_dir = ".";
  auto* synth = app.add_subcommand("synth", "generate a synthetic scene + GT heatmaps");
  synth->add_option("--width", spec.dims.width, "image width")->capture_default_str();
  synth->add_option("--height", spec.dims.height, "image height")->capture_default_str();
  synth->add_option("--switches", spec.n_switches, "number of diverging switches");
  synth->add_option("--curvature", spec.curvature, "center-line deflection at the top, px");
  synth->add_option("--gauge-bottom", spec.gauge_bottom, "rail-area width at the bottom, px");
  synth->add_option("--gauge-top", spec.gauge_top, "rail-area width at the top, px");
  synth->add_option("--distractors", spec.distractor_tracks, "non-ego parallel tracks");
  synth->add_option("--seed", spec.seed, "generator seed");
  synth->add_option("--value-sigma", noise.value_sigma, "heatmap value noise sigma");
  synth->add_option("--jitter-sigma", noise.jitter_sigma, "row jitter sigma, px");
  synth->add_option("--dropout-rows", noise.dropout_rows, "fraction of rows zeroed");
  synth->add_option("--noise-seed", noise_seed, "noise seed");
  synth->add_option("--rail-halfwidth", rail_halfwidth, "rail stroke half-width, px");
  synth->add_option("--out-dir", out_dir, "output directory")->capture_default_str();

  // ---- gtgen ----
  std::string scene_path;
  auto* gtgen = app.add_subcommand("gtgen", "scene JSON -> GT heatmaps and mask");
  gtgen->add_option("--scene", scene_path, "scene JSON")->required();
  gtgen->add_option("--rail-halfwidth", rail_halfwidth, "rail stroke half-width, px");
  gtgen->add_option("--out-dir", out_dir, "output directory")->capture_default_str();

  // ---- extract ----
  std::vector<std::string> heatmap_paths, prob_paths, dl_paths, dr_paths, seg_paths;
  std::vector<std::string> out_paths;
  int jobs = 1;
  ConfigFlags extract_cfg;
  auto* extract = app.add_subcommand("extract", "heatmap(s) -> ego-path document(s)");
  extract->add_option("--heatmap", heatmap_paths, "1-channel center heatmap (repeatable)");
  extract->add_option("--prob", prob_paths, "3-channel probability heatmap (repeatable)");
  extract->add_option("--dist-left", dl_paths, "3-channel left distance heatmap");
  extract->add_option("--dist-right", dr_paths, "3-channel right distance heatmap");
  extract->add_option("--seg", seg_paths, "segmentation mask for refinement (repeatable)");
  extract->add_option("--out", out_paths, "output paths document (repeatable)")->required();
  extract->add_option("--jobs", jobs, "parallel images");
  add_config_flags(extract, extract_cfg);

  // ---- eval ----
  std::vector<std::string> eval_paths, eval_scenes, pred_seg_paths, gt_seg_paths;
  std::string metrics_out;
  ConfigFlags eval_cfg;
  auto* eval = app.add_subcommand("eval", "paths document(s) vs scene(s) -> metrics JSON");
  eval->add_option("--paths", eval_paths, "paths document (repeatable)")->required();
  eval->add_option("--scene", eval_scenes, "scene JSON (repeatable)")->required();
  eval->add_option("--pred-seg", pred_seg_paths, "predicted mask for mIoU (repeatable)");
  eval->add_option("--gt-seg", gt_seg_paths, "ground-truth mask for mIoU (repeatable)");
  eval->add_option("--out", metrics_out, "metrics JSON output")->required();
  eval->add_option("--jobs", jobs, "parallel images");
  add_config_flags(eval, eval_cfg);

  // ---- render ----
  std::string render_paths, render_scene, render_prefix;
  ConfigFlags render_cfg;
  auto* render = app.add_subcommand("render", "paths document [+ scene] -> PNGs");
  render->add_option("--paths", render_paths, "paths document")->required();
  render->add_option("--scene", render_scene, "scene JSON for the GT overlay");
  render->add_option("--out-prefix", render_prefix, "output prefix")->required();
  add_config_flags(render, render_cfg);

  // ---- bench ----
  int bench_runs = 100;
  SceneSpec bench_spec;
  bench_spec.n_switches = 1;
  auto* bench = app.add_subcommand("bench", "time the post-processing chain");
  bench->add_option("--runs", bench_runs, "number of runs")->capture_default_str();
  bench->add_option("--width", bench_spec.dims.width, "image width")->capture_default_str();
  bench->add_option("--height", bench_spec.dims.height, "image height")->capture_default_str();
  bench->add_option("--switches", bench_spec.n_switches, "switches in the bench scene");
  bench->add_option("--seed", bench_spec.seed, "scene seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) return cmd_synth(spec, noise, noise_seed, rail_halfwidth, out_dir);
    if (gtgen->parsed()) return cmd_gtgen(scene_path, rail_halfwidth, out_dir);

    if (extract->parsed()) {
      const bool three_ch = !prob_paths.empty();
      const size_t n = three_ch ? prob_paths.size() : heatmap_paths.size();
      if (n == 0) throw ValidationError("extract: provide --heatmap or --prob inputs");
      if (out_paths.size() != n)
        throw ValidationError("extract: --out count must match input count");
      if (three_ch && (dl_paths.size() != n || dr_paths.size() != n))
        throw ValidationError("extract: 3-channel mode needs --dist-left/--dist-right per image");
      if (!seg_paths.empty() && seg_paths.size() != n)
        throw ValidationError("extract: --seg count must match input count");
      run_parallel(n, jobs, [&](size_t i) {
        PathsDocument doc;
        std::optional<SegMask> seg;
        if (!seg_paths.empty()) seg = load_seg_mask(seg_paths[i]);
        PipelineResult res;
        if (three_ch) {
          const Heatmap prob = load_heatmap(prob_paths[i]);
          doc.dims = prob.dims();
          PipelineConfig cfg = extract_cfg.apply(doc.dims, extract);
          if (!extract->count("--min-peak-value")) cfg.peak.min_peak_value = 0.5;
          doc.config = cfg;
          res = run_pipeline_3ch(prob, load_heatmap(dl_paths[i]), load_heatmap(dr_paths[i]),
                                 cfg, seg ? &*seg : nullptr);
        } else {
          const Heatmap hm = load_heatmap(heatmap_paths[i]);
          doc.dims = hm.dims();
          doc.config = extract_cfg.apply(doc.dims, extract);
          res = run_pipeline_1ch(hm, doc.config, seg ? &*seg : nullptr);
        }
        doc.tree = std::move(res.tree);
        doc.paths = std::move(res.paths);
        doc.fits = std::move(res.fits);
        save_paths_document(doc, out_paths[i]);
      });
      return 0;
    }

    if (eval->parsed()) {
      if (eval_paths.size() != eval_scenes.size())
        throw ValidationError("eval: --paths and --scene counts must match");
      if (pred_seg_paths.size() != gt_seg_paths.size())
        throw ValidationError("eval: --pred-seg and --gt-seg counts must match");
      MetricsReport report;
      report.per_image.resize(eval_paths.size());
      report.config = eval_cfg.apply(load_scene(eval_scenes[0]).dims, eval).match;
      run_parallel(eval_paths.size(), jobs, [&](size_t i) {
        const PathsDocument doc = load_paths_document(eval_paths[i]);
        const Scene scene = load_scene(eval_scenes[i]);
        PipelineConfig cfg = eval_cfg.apply(scene.dims, eval);
        const auto gt = gt_paths_via_postprocessing(scene, cfg);
        const PathMatching matching = match_paths(gt, doc.paths, cfg.match);
        ImageMetrics m;
        m.name = eval_paths[i];
        m.tp_pixel = pixel_level_metrics(matching, gt, doc.paths, PixelLevelMode::kTpPixel);
        m.all_pixel = pixel_level_metrics(matching, gt, doc.paths, PixelLevelMode::kAllPixel);
        m.path_level = path_level_metrics(matching);
        m.matched_pairs = static_cast<int>(matching.pairs.size());
        if (i < pred_seg_paths.size())
          m.miou = miou(load_seg_mask(pred_seg_paths[i]), load_seg_mask(gt_seg_paths[i]), 3);
        report.per_image[i] = std::move(m);
      });
      save_metrics_report(report, metrics_out);
      return 0;
    }

    if (render->parsed()) {
      const PathsDocument doc = load_paths_document(render_paths);
      std::optional<Scene> scene;
      if (!render_scene.empty()) scene = load_scene(render_scene);
      const PipelineConfig cfg = render_cfg.apply(doc.dims, render);
      const auto images = render_overlay(doc, scene ? &*scene : nullptr, cfg.match);
      atomic_write(render_prefix + ".png", encode_png(images[0]));
      for (size_t i = 1; i < images.size(); ++i)
        atomic_write(render_prefix + "_path" + std::to_string(i - 1) + ".png",
                     encode_png(images[i]));
      return 0;
    }

    if (bench->parsed()) {
      const Scene scene = generate_scene(bench_spec);
      const Heatmap hm = build_center_heatmap(scene);
      const SegMask seg = build_seg_mask(scene, 1.0);
      const PipelineConfig cfg = PipelineConfig::defaults_for(hm.dims());
      std::vector<double> ms(bench_runs);
      for (int r = 0; r < bench_runs; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        const PipelineResult res = run_pipeline_1ch(hm, cfg, &seg);
        const auto t1 = std::chrono::steady_clock::now();
        ms[r] = std::chrono::duration<double, std::milli>(t1 - t0).count();
        if (res.paths.empty()) throw ValidationError("bench: pipeline produced no paths");
      }
      std::sort(ms.begin(), ms.end());
      std::printf("runs: %d\nmedian_ms: %.3f\nmin_ms: %.3f\nmax_ms: %.3f\n", bench_runs,
                  ms[bench_runs / 2], ms.front(), ms.back());
      return 0;
    }
  } catch (const NoStartPathError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const GenerationInfeasible& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
