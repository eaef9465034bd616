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

#include "tpe/path_tree.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace tpe {

namespace {

double effective_tau_start(const TreeConfig& cfg, const GridDims& dims) {
  return cfg.tau_start > 0.0 ? cfg.tau_start : 0.25 * dims.width;
}

const Triplet& edge_tip(const PathEdge& e) { return e.trajectory.back(); }

}  // namespace

PathTree build_path_tree(const std::vector<std::vector<TrackSegment>>& segments,
                         const TreeConfig& cfg, const GridDims& dims,
                         int subregion_height) {
  validate_dims(dims);
  if (subregion_height < 1)
    throw ValidationError("build_path_tree: subregion_height must be >= 1");

  PathTree tree;
  PathNode start;
  start.id = 0;
  start.kind = NodeKind::kStart;
  start.x = dims.width / 2.0;
  start.y = dims.height;
  tree.nodes.push_back(start);

  // Seed: bottom-most sub-region segment nearest to the bottom center.
  const double tau_start = effective_tau_start(cfg, dims);
  const TrackSegment* seed = nullptr;
  double seed_dist = tau_start;
  if (!segments.empty()) {
    for (const TrackSegment& s : segments[0]) {
      const double d = std::abs(s.bottom().x_center - start.x);
      if (d <= tau_start && (seed == nullptr || d < seed_dist)) {
        seed = &s;
        seed_dist = d;
      }
    }
  }
  if (seed == nullptr)
    throw NoStartPathError("no track segment within " + std::to_string(tau_start) +
                           " px of the bottom center");

  PathEdge first;
  first.id = 0;
  first.parent_node = 0;
  first.trajectory = seed->triplets;
  tree.edges.push_back(std::move(first));

  std::vector<bool> merge_flag;  // per edge, set when a runner-up match existed
  merge_flag.push_back(false);

  const int max_gap = cfg.max_row_gap_factor * subregion_height + 1;

  for (size_t region = 0; region < segments.size(); ++region) {
    // Edges open at the start of this sub-region pass.
    std::vector<int> open_edges;
    for (const PathEdge& e : tree.edges)
      if (e.child_node == -1) open_edges.push_back(e.id);

    struct Attachment {
      const TrackSegment* seg;
      double dist;
    };
    std::map<int, std::vector<Attachment>> per_edge;

    for (const TrackSegment& s : segments[region]) {
      if (&s == seed) continue;
      int best_edge = -1;
      double best_dist = 0.0;
      int eligible = 0;
      for (int eid : open_edges) {
        const Triplet& tip = edge_tip(tree.edges[eid]);
        const int gap = tip.y - s.bottom().y;
        if (gap < 1 || gap > max_gap) continue;
        const double d = std::abs(s.bottom().x_center - tip.x_center);
        if (d > cfg.tau_seg) continue;
        ++eligible;
        if (best_edge == -1 || d < best_dist) {
          best_edge = eid;
          best_dist = d;
        }
      }
      if (best_edge == -1) continue;  // not on any ego-path: discarded
      per_edge[best_edge].push_back({&s, best_dist});
      if (eligible > 1) {
        // The losing edges may be a converging rail; flag them all.
        for (int eid : open_edges) {
          if (eid == best_edge) continue;
          const Triplet& tip = edge_tip(tree.edges[eid]);
          const int gap = tip.y - s.bottom().y;
          if (gap < 1 || gap > max_gap) continue;
          if (std::abs(s.bottom().x_center - tip.x_center) <= cfg.tau_seg)
            merge_flag[eid] = true;
        }
      }
    }

    for (auto& [eid, attached] : per_edge) {
      if (attached.size() == 1) {
        // Continuation: merge the segment into the edge.
        const auto& traj = attached[0].seg->triplets;
        tree.edges[eid].trajectory.insert(tree.edges[eid].trajectory.end(), traj.begin(),
                                          traj.end());
        continue;
      }
      // Divergence: close the edge with a switch node and branch.
      std::sort(attached.begin(), attached.end(), [](const Attachment& a, const Attachment& b) {
        return a.seg->bottom().x_center < b.seg->bottom().x_center;
      });
      const Triplet& tip = edge_tip(tree.edges[eid]);
      PathNode sw;
      sw.id = static_cast<int>(tree.nodes.size());
      sw.kind = NodeKind::kSwitch;
      sw.x = tip.x_center;
      sw.y = tip.y;
      tree.nodes.push_back(sw);
      tree.edges[eid].child_node = sw.id;
      for (const Attachment& a : attached) {
        PathEdge child;
        child.id = static_cast<int>(tree.edges.size());
        child.parent_node = sw.id;
        child.trajectory = a.seg->triplets;
        tree.edges.push_back(std::move(child));
        merge_flag.push_back(false);
      }
    }
  }

  // Remaining open edges terminate in end nodes.
  for (PathEdge& e : tree.edges) {
    if (e.child_node != -1) continue;
    const Triplet& tip = edge_tip(e);
    PathNode end;
    end.id = static_cast<int>(tree.nodes.size());
    end.kind = NodeKind::kEnd;
    end.x = tip.x_center;
    end.y = tip.y;
    end.merge_suspected = merge_flag[e.id];
    tree.nodes.push_back(end);
    e.child_node = end.id;
  }
  return tree;
}

std::vector<EgoPath> enumerate_ego_paths(const PathTree& tree) {
  std::map<int, int> incoming;  // node id -> edge id ending there
  for (const PathEdge& e : tree.edges) incoming[e.child_node] = e.id;

  std::vector<EgoPath> paths;
  for (const PathNode& n : tree.nodes) {
    if (n.kind != NodeKind::kEnd) continue;
    std::vector<int> chain;
    int node = n.id;
    while (node != 0) {
      const auto it = incoming.find(node);
      if (it == incoming.end())
        throw ValidationError("enumerate_ego_paths: disconnected node");
      chain.push_back(it->second);
      node = tree.edges[it->second].parent_node;
    }
    std::reverse(chain.begin(), chain.end());
    EgoPath p;
    p.edge_ids = chain;
    for (int eid : chain) {
      const auto& traj = tree.edges[eid].trajectory;
      p.triplets.insert(p.triplets.end(), traj.begin(), traj.end());
    }
    paths.push_back(std::move(p));
  }
  return paths;
}

std::vector<EgoPath> filter_paths(const std::vector<EgoPath>& paths, const TreeConfig& cfg,
                                  const GridDims& dims) {
  std::vector<EgoPath> kept;
  for (const EgoPath& p : paths) {
    if (static_cast<int>(p.triplets.size()) < cfg.filter_min_rows) continue;
    const double extent = p.triplets.front().y - p.triplets.back().y;
    if (extent < cfg.filter_min_extent * dims.height) continue;
    kept.push_back(p);
  }
  return kept;
}

}  // namespace tpe
