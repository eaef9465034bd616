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

#include "tpe/refinement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tpe {

namespace {

// Nearest rail-track column to x within +-w_snap, or nullopt. Equal-distance
// ties go to the higher probability when a grid is given, else to the left.
std::optional<int> nearest_rail_column(double x, int y, const SegMask& seg, int w_snap,
                                       const Heatmap* rail_prob) {
  const int x0 = static_cast<int>(std::lround(x));
  std::optional<int> best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int c = std::max(0, x0 - w_snap); c <= std::min(seg.width() - 1, x0 + w_snap); ++c) {
    if (seg.at(c, y) != SegClass::kRailTrack) continue;
    const double d = std::abs(c - x);
    if (d < best_dist) {
      best = c;
      best_dist = d;
    } else if (d == best_dist && best && rail_prob &&
               rail_prob->at(c, y) > rail_prob->at(*best, y)) {
      best = c;
    }
  }
  return best;
}

}  // namespace

EgoPath snap_to_segmentation(const EgoPath& path, const SegMask& seg, const SnapConfig& cfg,
                             const Heatmap* rail_prob) {
  if (cfg.w_snap < 0) throw ValidationError("snap_to_segmentation: w_snap must be >= 0");
  EgoPath out = path;
  bool have_prev = false;
  double prev_width = 0.0;
  for (Triplet& t : out.triplets) {
    if (t.y < 0 || t.y >= seg.height()) continue;
    const auto left = nearest_rail_column(t.x_left, t.y, seg, cfg.w_snap, rail_prob);
    const auto right = nearest_rail_column(t.x_right, t.y, seg, cfg.w_snap, rail_prob);
    const double xl_snap = left ? static_cast<double>(*left) : t.x_left;
    const double xr_snap = right ? static_cast<double>(*right) : t.x_right;

    auto acceptable = [&](double xl, double xr) {
      if (xl > xr) return false;
      if (cfg.enforce_monotone_width && have_prev && (xr - xl) > prev_width) return false;
      return true;
    };
    // Prefer both moves, then either one alone, then the original positions.
    if (acceptable(xl_snap, xr_snap)) {
      t.x_left = xl_snap;
      t.x_right = xr_snap;
    } else if (acceptable(xl_snap, t.x_right)) {
      t.x_left = xl_snap;
    } else if (acceptable(t.x_left, xr_snap)) {
      t.x_right = xr_snap;
    }
    prev_width = t.x_right - t.x_left;
    have_prev = true;
  }
  return out;
}

namespace {

// Solves the d+1 square normal equations by Gaussian elimination with partial
// pivoting; empty result signals (near) rank deficiency.
std::vector<double> solve_normal(std::vector<std::vector<double>> a, std::vector<double> b) {
  const size_t n = b.size();
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    for (size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (std::abs(a[pivot][col]) < 1e-12) return {};
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

// Fit x = p(t) on centered/scaled t, then expand back to ascending powers of y
// with t = (y - mid) / scale.
std::vector<double> fit_one_rail(const std::vector<double>& ys, const std::vector<double>& xs,
                                 int degree, double mid, double scale) {
  const size_t n = ys.size();
  for (int d = degree; d >= 0; --d) {
    const size_t m = static_cast<size_t>(d) + 1;
    std::vector<std::vector<double>> ata(m, std::vector<double>(m, 0.0));
    std::vector<double> atb(m, 0.0);
    for (size_t i = 0; i < n; ++i) {
      const double t = (ys[i] - mid) / scale;
      std::vector<double> pow(m, 1.0);
      for (size_t k = 1; k < m; ++k) pow[k] = pow[k - 1] * t;
      for (size_t r = 0; r < m; ++r) {
        atb[r] += pow[r] * xs[i];
        for (size_t c = 0; c < m; ++c) ata[r][c] += pow[r] * pow[c];
      }
    }
    std::vector<double> a = solve_normal(std::move(ata), std::move(atb));
    if (a.empty()) continue;  // rank-deficient: retry with lower degree

    // Expand sum a_k ((y - mid)/scale)^k into powers of y.
    std::vector<double> out(static_cast<size_t>(degree) + 1, 0.0);
    for (size_t k = 0; k < a.size(); ++k) {
      // ((y - mid)/scale)^k = scale^-k * sum_j C(k,j) y^j (-mid)^(k-j)
      double binom = 1.0;
      for (size_t j = 0; j <= k; ++j) {
        if (j > 0) binom = binom * (k - j + 1) / j;
        out[j] += a[k] / std::pow(scale, static_cast<double>(k)) * binom *
                  std::pow(-mid, static_cast<double>(k - j));
      }
    }
    return out;
  }
  throw ValidationError("fit_rail_polynomials: rank-deficient down to degree 0");
}

}  // namespace

double eval_polynomial(const std::vector<double>& coeffs, double y) {
  double acc = 0.0;
  for (size_t k = coeffs.size(); k-- > 0;) acc = acc * y + coeffs[k];
  return acc;
}

FittedPath fit_rail_polynomials(const EgoPath& path, int degree) {
  if (path.triplets.size() < 2)
    throw ValidationError("fit_rail_polynomials: need at least 2 support points");
  if (degree < 1) throw ValidationError("fit_rail_polynomials: degree must be >= 1");
  const int d = std::min<int>(degree, static_cast<int>(path.triplets.size()) - 1);

  std::vector<double> ys, xl, xr;
  ys.reserve(path.triplets.size());
  for (const Triplet& t : path.triplets) {
    ys.push_back(t.y);
    xl.push_back(t.x_left);
    xr.push_back(t.x_right);
  }
  const auto [lo, hi] = std::minmax_element(ys.begin(), ys.end());
  const double mid = (*lo + *hi) / 2.0;
  const double scale = std::max(1.0, (*hi - *lo) / 2.0);

  FittedPath fit;
  fit.degree = d;
  fit.y_min = *lo;
  fit.y_max = *hi;
  fit.left_coeffs = fit_one_rail(ys, xl, d, mid, scale);
  fit.right_coeffs = fit_one_rail(ys, xr, d, mid, scale);
  return fit;
}

}  // namespace tpe
