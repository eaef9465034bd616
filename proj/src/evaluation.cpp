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

#include "tpe/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace tpe {

MatchStats finalize_stats(long long tp, long long fp, long long fn) {
  MatchStats s;
  s.tp = tp;
  s.fp = fp;
  s.fn = fn;
  s.precision = (tp + fp == 0) ? 1.0 : static_cast<double>(tp) / (tp + fp);
  s.recall = (tp + fn == 0) ? 1.0 : static_cast<double>(tp) / (tp + fn);
  s.f1 = (s.precision + s.recall == 0.0)
             ? 0.0
             : 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

namespace {

struct RailPixel {
  double x;
  double y;
};

void collect_side(const EgoPath& p, bool left, std::vector<RailPixel>& out) {
  out.reserve(out.size() + p.triplets.size());
  for (const Triplet& t : p.triplets)
    out.push_back({left ? t.x_left : t.x_right, static_cast<double>(t.y)});
}

// Maximum bipartite matching (Kuhn with greedy seeding) between one side's
// GT and estimated pixels under the Chebyshev vicinity.
long long match_side(const std::vector<RailPixel>& gt, std::vector<RailPixel> est,
                     double radius) {
  std::sort(est.begin(), est.end(),
            [](const RailPixel& a, const RailPixel& b) { return a.y < b.y; });

  auto candidates = [&](const RailPixel& g) {
    std::vector<int> out;
    auto lo = std::lower_bound(est.begin(), est.end(), g.y - radius,
                               [](const RailPixel& e, double y) { return e.y < y; });
    for (auto it = lo; it != est.end() && it->y <= g.y + radius; ++it) {
      if (std::abs(it->x - g.x) <= radius) out.push_back(static_cast<int>(it - est.begin()));
    }
    return out;
  };

  std::vector<int> est_owner(est.size(), -1);
  std::vector<int> gt_match(gt.size(), -1);

  for (size_t i = 0; i < gt.size(); ++i) {
    for (int e : candidates(gt[i])) {
      if (est_owner[e] == -1) {
        est_owner[e] = static_cast<int>(i);
        gt_match[i] = e;
        break;
      }
    }
  }

  std::vector<char> visited;
  std::function<bool(int)> try_augment = [&](int gi) -> bool {
    for (int e : candidates(gt[gi])) {
      if (visited[e]) continue;
      visited[e] = 1;
      if (est_owner[e] == -1 || try_augment(est_owner[e])) {
        est_owner[e] = gi;
        gt_match[gi] = e;
        return true;
      }
    }
    return false;
  };

  long long matched = 0;
  for (size_t i = 0; i < gt.size(); ++i) {
    if (gt_match[i] != -1) {
      ++matched;
      continue;
    }
    visited.assign(est.size(), 0);
    if (try_augment(static_cast<int>(i))) ++matched;
  }
  return matched;
}

}  // namespace

long long path_rail_pixel_count(const EgoPath& path) {
  return 2LL * static_cast<long long>(path.triplets.size());
}

MatchStats rail_pixel_f1(const EgoPath& gt, const EgoPath& est, double radius) {
  long long tp = 0;
  for (bool left : {true, false}) {
    std::vector<RailPixel> g, e;
    collect_side(gt, left, g);
    collect_side(est, left, e);
    tp += match_side(g, std::move(e), radius);
  }
  const long long gt_total = path_rail_pixel_count(gt);
  const long long est_total = path_rail_pixel_count(est);
  return finalize_stats(tp, est_total - tp, gt_total - tp);
}

PathMatching match_paths(const std::vector<EgoPath>& gt, const std::vector<EgoPath>& est,
                         const MatchConfig& cfg) {
  struct Scored {
    int gi;
    int ei;
    MatchStats stats;
  };
  std::vector<Scored> scored;
  for (int gi = 0; gi < static_cast<int>(gt.size()); ++gi)
    for (int ei = 0; ei < static_cast<int>(est.size()); ++ei)
      scored.push_back({gi, ei, rail_pixel_f1(gt[gi], est[ei], cfg.radius)});

  std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.stats.f1 != b.stats.f1) return a.stats.f1 > b.stats.f1;
    if (a.gi != b.gi) return a.gi < b.gi;
    return a.ei < b.ei;
  });

  PathMatching out;
  std::vector<bool> gt_used(gt.size(), false), est_used(est.size(), false);
  for (const Scored& s : scored) {
    if (s.stats.f1 < cfg.m_min) break;
    if (gt_used[s.gi] || est_used[s.ei]) continue;
    gt_used[s.gi] = true;
    est_used[s.ei] = true;
    out.pairs.push_back({s.gi, s.ei, s.stats});
  }
  for (int gi = 0; gi < static_cast<int>(gt.size()); ++gi)
    if (!gt_used[gi]) out.unmatched_gt.push_back(gi);
  for (int ei = 0; ei < static_cast<int>(est.size()); ++ei)
    if (!est_used[ei]) out.unmatched_est.push_back(ei);
  return out;
}

MatchStats pixel_level_metrics(const PathMatching& matching, const std::vector<EgoPath>& gt,
                               const std::vector<EgoPath>& est, PixelLevelMode mode) {
  long long tp = 0, fp = 0, fn = 0;
  for (const PathPair& p : matching.pairs) {
    tp += p.stats.tp;
    fp += p.stats.fp;
    fn += p.stats.fn;
  }
  if (mode == PixelLevelMode::kAllPixel) {
    for (int gi : matching.unmatched_gt) fn += path_rail_pixel_count(gt[gi]);
    for (int ei : matching.unmatched_est) fp += path_rail_pixel_count(est[ei]);
  }
  return finalize_stats(tp, fp, fn);
}

MatchStats path_level_metrics(const PathMatching& matching) {
  return finalize_stats(static_cast<long long>(matching.pairs.size()),
                        static_cast<long long>(matching.unmatched_est.size()),
                        static_cast<long long>(matching.unmatched_gt.size()));
}

double miou(const SegMask& pred, const SegMask& gt, int n_classes) {
  if (!(pred.dims() == gt.dims())) throw ValidationError("miou: dims mismatch");
  if (n_classes < 1) throw ValidationError("miou: n_classes must be >= 1");
  std::vector<long long> inter(n_classes, 0), uni(n_classes, 0);
  const auto& a = pred.classes();
  const auto& b = gt.classes();
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] >= n_classes || b[i] >= n_classes)
      throw ValidationError("miou: class id out of range");
    if (a[i] == b[i]) {
      ++inter[a[i]];
      ++uni[a[i]];
    } else {
      ++uni[a[i]];
      ++uni[b[i]];
    }
  }
  double sum = 0.0;
  int present = 0;
  for (int c = 0; c < n_classes; ++c) {
    if (uni[c] == 0) continue;
    sum += static_cast<double>(inter[c]) / uni[c];
    ++present;
  }
  return present == 0 ? 1.0 : sum / present;
}

}  // namespace tpe
