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

#include <doctest.h>

#include <cmath>

#include "tpe/rng.hpp"

using namespace tpe;

namespace {

Triplet rails(int y, double xl, double xr) {
  Triplet t;
  t.y = y;
  t.x_left = xl;
  t.x_right = xr;
  t.x_center = 0.5 * (xl + xr);
  return t;
}

// Vertical strip covering rows [y_top, y_bottom], constant rails.
EgoPath strip(int y_bottom, int y_top, double xl, double xr) {
  EgoPath p;
  for (int y = y_bottom; y >= y_top; --y) p.triplets.push_back(rails(y, xl, xr));
  return p;
}

struct Pixel {
  double x, y;
};

// Exhaustive maximum bipartite matching for one rail side, exponential in the
// number of GT pixels; only usable on tiny fixtures.
long long oracle_match(const std::vector<Pixel>& gt, const std::vector<Pixel>& est,
                       double radius, size_t gi = 0, uint32_t used = 0) {
  if (gi == gt.size()) return 0;
  long long best = oracle_match(gt, est, radius, gi + 1, used);  // leave gi unmatched
  for (size_t e = 0; e < est.size(); ++e) {
    if (used & (1u << e)) continue;
    if (std::abs(gt[gi].x - est[e].x) > radius) continue;
    if (std::abs(gt[gi].y - est[e].y) > radius) continue;
    best = std::max(best,
                    1 + oracle_match(gt, est, radius, gi + 1, used | (1u << e)));
  }
  return best;
}

long long oracle_tp(const EgoPath& gt, const EgoPath& est, double radius) {
  long long tp = 0;
  for (bool left : {true, false}) {
    std::vector<Pixel> g, e;
    for (const Triplet& t : gt.triplets)
      g.push_back({left ? t.x_left : t.x_right, static_cast<double>(t.y)});
    for (const Triplet& t : est.triplets)
      e.push_back({left ? t.x_left : t.x_right, static_cast<double>(t.y)});
    tp += oracle_match(g, e, radius);
  }
  return tp;
}

}  // namespace

TEST_CASE("finalize_stats: conventions and hand values") {
  const MatchStats empty = finalize_stats(0, 0, 0);
  CHECK(empty.precision == 1.0);
  CHECK(empty.recall == 1.0);
  CHECK(empty.f1 == doctest::Approx(1.0));

  const MatchStats misses = finalize_stats(0, 0, 5);
  CHECK(misses.precision == 1.0);
  CHECK(misses.recall == 0.0);
  CHECK(misses.f1 == doctest::Approx(0.0));

  const MatchStats s = finalize_stats(3, 1, 2);
  CHECK(s.precision == doctest::Approx(0.75));
  CHECK(s.recall == doctest::Approx(0.6));
  CHECK(s.f1 == doctest::Approx(2.0 * 0.75 * 0.6 / 1.35));
}

TEST_CASE("rail_pixel_f1: identical paths score 1") {
  const EgoPath p = strip(9, 0, 10, 20);
  const MatchStats s = rail_pixel_f1(p, p, 1.0);
  CHECK(s.tp == 20);
  CHECK(s.fp == 0);
  CHECK(s.fn == 0);
  CHECK(s.f1 == doctest::Approx(1.0));
}

TEST_CASE("rail_pixel_f1: offset rails match only within the radius") {
  const EgoPath gt = strip(9, 0, 10, 30);
  const EgoPath est = strip(9, 0, 12, 32);
  CHECK(rail_pixel_f1(gt, est, 1.0).tp == 0);
  const MatchStats s = rail_pixel_f1(gt, est, 2.0);
  CHECK(s.tp == 20);
  CHECK(s.f1 == doctest::Approx(1.0));
}

TEST_CASE("rail_pixel_f1: left pixels never match right pixels") {
  const EgoPath gt = strip(4, 0, 10, 30);
  const EgoPath est = strip(4, 0, 0, 10);  // est right rail on the GT left rail
  CHECK(rail_pixel_f1(gt, est, 1.0).tp == 0);
}

TEST_CASE("rail_pixel_f1: each estimated pixel is used at most once") {
  const EgoPath gt = strip(1, 0, 10, 20);   // 2 rows
  const EgoPath est = strip(0, 0, 10, 20);  // 1 row, within radius of both
  const MatchStats s = rail_pixel_f1(gt, est, 2.0);
  CHECK(s.tp == 2);  // one per side
  CHECK(s.fp == 0);
  CHECK(s.fn == 2);
}

TEST_CASE("rail_pixel_f1: maximum matching beats first-come assignment") {
  // GT pixel A can take either estimated pixel, GT pixel B only the first.
  // A greedy scan that hands the first estimated pixel to A would lose B;
  // the maximum matching keeps both.
  EgoPath gt, est;
  gt.triplets = {rails(4, 10, 30), rails(2, 11, 31)};
  est.triplets = {rails(3, 11, 31), rails(4, 12, 32)};
  const MatchStats s = rail_pixel_f1(gt, est, 2.0);
  CHECK(s.tp == 4);
}

TEST_CASE("rail_pixel_f1 equals the exhaustive matching (property)") {
  Pcg32 rng(41);
  for (int it = 0; it < 300; ++it) {
    const double radius = 1.0 + static_cast<int>(rng.uniform(0, 3));
    EgoPath gt, est;
    const int ng = 1 + static_cast<int>(rng.uniform(0, 5));
    const int ne = 1 + static_cast<int>(rng.uniform(0, 5));
    int y = 20;
    for (int i = 0; i < ng; ++i) {
      y -= 1 + static_cast<int>(rng.uniform(0, 3));
      const double xl = rng.uniform(0, 12);
      gt.triplets.push_back(rails(y, xl, xl + rng.uniform(0, 8)));
    }
    y = 20;
    for (int i = 0; i < ne; ++i) {
      y -= 1 + static_cast<int>(rng.uniform(0, 3));
      const double xl = rng.uniform(0, 12);
      est.triplets.push_back(rails(y, xl, xl + rng.uniform(0, 8)));
    }
    const MatchStats s = rail_pixel_f1(gt, est, radius);
    REQUIRE(s.tp == oracle_tp(gt, est, radius));
    // Symmetry: swapping gt and est swaps precision and recall.
    const MatchStats r = rail_pixel_f1(est, gt, radius);
    CHECK(r.tp == s.tp);
    CHECK(r.precision == doctest::Approx(s.recall));
    CHECK(r.recall == doctest::Approx(s.precision));
  }
}

TEST_CASE("match_paths: descending F1, one-to-one, m_min cutoff") {
  const std::vector<EgoPath> gt = {strip(9, 0, 10, 20), strip(9, 0, 40, 50)};
  const std::vector<EgoPath> est = {strip(9, 0, 10, 20), strip(9, 5, 40, 50)};
  MatchConfig cfg;
  cfg.radius = 1.0;
  cfg.m_min = 0.5;
  const PathMatching m = match_paths(gt, est, cfg);
  REQUIRE(m.pairs.size() == 2);
  CHECK(m.pairs[0].gt_index == 0);
  CHECK(m.pairs[0].est_index == 0);
  CHECK(m.pairs[0].stats.f1 == doctest::Approx(1.0));
  CHECK(m.pairs[1].gt_index == 1);
  CHECK(m.pairs[1].est_index == 1);
  CHECK(m.pairs[1].stats.f1 == doctest::Approx(2.0 / 3.0));
  CHECK(m.unmatched_gt.empty());
  CHECK(m.unmatched_est.empty());

  cfg.m_min = 0.7;  // the partial pair falls below the cutoff
  const PathMatching strict = match_paths(gt, est, cfg);
  REQUIRE(strict.pairs.size() == 1);
  CHECK(strict.unmatched_gt == std::vector<int>{1});
  CHECK(strict.unmatched_est == std::vector<int>{1});
}

TEST_CASE("match_paths: greedy picks the globally best pair first") {
  // gt0 overlaps est0 fully and est1 partially; gt1 overlaps est0 partially.
  // Greedy must award est0 to gt0 and leave gt1 with est1.
  const std::vector<EgoPath> gt = {strip(19, 0, 10, 20), strip(19, 10, 12, 22)};
  const std::vector<EgoPath> est = {strip(19, 0, 10, 20), strip(19, 12, 12, 22)};
  MatchConfig cfg;
  cfg.radius = 1.0;
  cfg.m_min = 0.1;
  const PathMatching m = match_paths(gt, est, cfg);
  REQUIRE(m.pairs.size() == 2);
  CHECK(m.pairs[0].gt_index == 0);
  CHECK(m.pairs[0].est_index == 0);
  CHECK(m.pairs[1].gt_index == 1);
  CHECK(m.pairs[1].est_index == 1);
}

TEST_CASE("pixel_level_metrics: tp-pixel vs all-pixel modes") {
  const std::vector<EgoPath> gt = {strip(9, 0, 10, 20), strip(9, 0, 40, 50)};
  const std::vector<EgoPath> est = {strip(9, 0, 10, 20)};
  MatchConfig cfg;
  cfg.radius = 1.0;
  const PathMatching m = match_paths(gt, est, cfg);
  REQUIRE(m.pairs.size() == 1);
  REQUIRE(m.unmatched_gt.size() == 1);

  const MatchStats tp_mode = pixel_level_metrics(m, gt, est, PixelLevelMode::kTpPixel);
  CHECK(tp_mode.tp == 20);
  CHECK(tp_mode.fn == 0);
  CHECK(tp_mode.precision == doctest::Approx(1.0));
  CHECK(tp_mode.recall == doctest::Approx(1.0));

  const MatchStats all_mode = pixel_level_metrics(m, gt, est, PixelLevelMode::kAllPixel);
  CHECK(all_mode.tp == 20);
  CHECK(all_mode.fn == 20);  // the whole unmatched GT path
  CHECK(all_mode.fp == 0);
  CHECK(all_mode.recall == doctest::Approx(0.5));
}

TEST_CASE("path_level_metrics counts pairs and leftovers") {
  PathMatching m;
  m.pairs.resize(2);
  m.unmatched_gt = {2};
  m.unmatched_est = {3, 4};
  const MatchStats s = path_level_metrics(m);
  CHECK(s.tp == 2);
  CHECK(s.fn == 1);
  CHECK(s.fp == 2);
  CHECK(s.precision == doctest::Approx(0.5));
  CHECK(s.recall == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("miou: hand cases") {
  SegMask a({4, 1}), b({4, 1});
  // pred 0 0 1 1 vs gt 0 1 1 1: class 0 IoU 1/2, class 1 IoU 2/3.
  a.set(2, 0, SegClass::kRailTrack);
  a.set(3, 0, SegClass::kRailTrack);
  b.set(1, 0, SegClass::kRailTrack);
  b.set(2, 0, SegClass::kRailTrack);
  b.set(3, 0, SegClass::kRailTrack);
  CHECK(miou(a, b, 3) == doctest::Approx((0.5 + 2.0 / 3.0) / 2.0));
  CHECK(miou(a, a, 3) == doctest::Approx(1.0));
  // Classes absent from both are excluded from the mean.
  CHECK(miou(SegMask({4, 1}), SegMask({4, 1}), 3) == doctest::Approx(1.0));

  CHECK_THROWS_AS(miou(SegMask({4, 1}), SegMask({4, 2}), 3), ValidationError);
  CHECK_THROWS_AS(miou(a, b, 1), ValidationError);
}

TEST_CASE("path_rail_pixel_count is two per row") {
  CHECK(path_rail_pixel_count(strip(9, 0, 10, 20)) == 20);
  CHECK(path_rail_pixel_count(EgoPath{}) == 0);
}
