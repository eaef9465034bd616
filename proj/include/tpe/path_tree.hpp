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

#include "tpe/segment_clustering.hpp"

namespace tpe {

/// Raised when no bottom-region segment lies within tau_start of the bottom
/// center of the image.
class NoStartPathError : public std::runtime_error {
 public:
  explicit NoStartPathError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class NodeKind : uint8_t { kStart = 0, kSwitch = 1, kEnd = 2 };

struct PathNode {
  int id = 0;
  NodeKind kind = NodeKind::kStart;
  double x = 0.0;
  double y = 0.0;
  // Set on an end node when a segment also matched this edge but was pulled
  // to a nearer one, i.e. a possible rail merge the tree model cannot express.
  bool merge_suspected = false;
};

struct PathEdge {
  int id = 0;
  int parent_node = 0;
  int child_node = -1;  // -1 while the edge is still open at the top
  std::vector<Triplet> trajectory;  // bottom-up, strictly decreasing y
};

struct PathTree {
  std::vector<PathNode> nodes;  // nodes[0] is the start node
  std::vector<PathEdge> edges;
};

/// A traversal from the start node to one end node.
struct EgoPath {
  std::vector<Triplet> triplets;  // bottom-up, strictly decreasing y
  std::vector<int> edge_ids;
};

struct TreeConfig {
  double tau_seg = 12.0;       // edge-tip to segment-bottom association distance
  double tau_start = 0.0;      // 0 means 0.25 * W
  int max_row_gap_factor = 2;  // tolerated missing rows = factor * h
  int filter_min_rows = 3;
  double filter_min_extent = 0.2;  // fraction of H
};

/// Bottom-up tree construction over per-sub-region segments. Segments attach
/// to the nearest open edge tip within tau_seg; two or more segments on one
/// edge create a switch node; unattached segments are discarded.
PathTree build_path_tree(const std::vector<std::vector<TrackSegment>>& segments,
                         const TreeConfig& cfg, const GridDims& dims,
                         int subregion_height);

/// One path per end node, concatenating edge trajectories root-to-leaf.
std::vector<EgoPath> enumerate_ego_paths(const PathTree& tree);

/// Drops paths with too few triplets or too little vertical extent.
std::vector<EgoPath> filter_paths(const std::vector<EgoPath>& paths, const TreeConfig& cfg,
                                  const GridDims& dims);

}  // namespace tpe
