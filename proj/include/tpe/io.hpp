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

#include <filesystem>
#include <string>

#include "tpe/evaluation.hpp"
#include "tpe/pipeline.hpp"

namespace tpe {

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// ---- annotation JSON ----
// {"width": int, "height": int,
//  "tracks": [{"id": int, "left": [[x, y], ...], "right": [[x, y], ...]}]}

std::string encode_scene(const Scene& scene);
Scene decode_scene(const std::string& json_text);
Scene load_scene(const std::filesystem::path& path);
void save_scene(const Scene& scene, const std::filesystem::path& path);

// ---- TPEH heatmap binary ----
// magic "TPEH", version u16 = 1, width u32, height u32, then W*H
// little-endian IEEE-754 binary32 values, row-major, top row first.

std::string encode_heatmap(const Heatmap& hm);
Heatmap decode_heatmap(const std::string& bytes);
Heatmap load_heatmap(const std::filesystem::path& path);
void save_heatmap(const Heatmap& hm, const std::filesystem::path& path);

// Segmentation masks reuse the container with magic "TPES" and one byte per
// class id.
std::string encode_seg_mask(const SegMask& mask);
SegMask decode_seg_mask(const std::string& bytes);
SegMask load_seg_mask(const std::filesystem::path& path);
void save_seg_mask(const SegMask& mask, const std::filesystem::path& path);

// ---- extraction result document ----

struct PathsDocument {
  GridDims dims;
  PipelineConfig config;
  PathTree tree;
  std::vector<EgoPath> paths;
  std::vector<FittedPath> fits;
};

std::string encode_paths_document(const PathsDocument& doc);
PathsDocument decode_paths_document(const std::string& json_text);
PathsDocument load_paths_document(const std::filesystem::path& path);
void save_paths_document(const PathsDocument& doc, const std::filesystem::path& path);

// ---- metrics report JSON ----

struct ImageMetrics {
  std::string name;
  MatchStats tp_pixel;
  MatchStats all_pixel;
  MatchStats path_level;
  int matched_pairs = 0;
  double miou = -1.0;  // < 0 when no masks were evaluated
};

struct MetricsReport {
  MatchConfig config;
  std::vector<ImageMetrics> per_image;
};

/// Serializes per-image rows plus micro (summed counts) and macro (mean of
/// per-image ratios) aggregates for all three levels.
std::string encode_metrics_report(const MetricsReport& report);
void save_metrics_report(const MetricsReport& report, const std::filesystem::path& path);

/// Micro-averaged stats across images at one level.
MatchStats micro_average(const std::vector<MatchStats>& stats);

// ---- misc ----

/// Writes via a temp file in the same directory, then renames.
void atomic_write(const std::filesystem::path& path, const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

}  // namespace tpe
