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

#include "tpe/losses.hpp"

#include <algorithm>
#include <cmath>

namespace tpe {

namespace {
constexpr double kProbClamp = 1e-12;
}

Heatmap pixel_ce(const std::vector<Heatmap>& prob, const SegMask& labels) {
  if (prob.empty()) throw ValidationError("pixel_ce: no class grids");
  for (const Heatmap& p : prob) {
    if (!(p.dims() == labels.dims()))
      throw ValidationError("pixel_ce: class grid dims do not match labels");
  }
  const int w = labels.width();
  const int h = labels.height();
  Heatmap out(labels.dims());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double sum = 0.0;
      for (const Heatmap& p : prob) sum += p.at(x, y);
      if (std::abs(sum - 1.0) > 1e-4)
        throw ValidationError("pixel_ce: class probabilities do not sum to 1 at (" +
                              std::to_string(x) + ", " + std::to_string(y) + ")");
      const uint8_t cls = labels.raw(x, y);
      if (cls >= prob.size())
        throw ValidationError("pixel_ce: label class out of range");
      const double p_true = std::max(static_cast<double>(prob[cls].at(x, y)), kProbClamp);
      out.at(x, y) = static_cast<float>(-std::log(p_true));
    }
  }
  return out;
}

double bootstrapped_ce(const Heatmap& loss_grid, const LossConfig& cfg) {
  const long long n = loss_grid.dims().pixel_count();
  if (cfg.k < 1 || cfg.k > n)
    throw ValidationError("bootstrapped_ce: K must be in [1, W*H]");

  const std::vector<float>& v = loss_grid.values();
  double sum = 0.0;
  long long kept = 0;
  for (float f : v) {
    if (f > cfg.t_k) {
      sum += f;
      ++kept;
    }
  }
  if (kept < cfg.k) {
    // Fewer than K above the floor: take the K largest (ties at the K-th kept).
    std::vector<float> sorted(v);
    std::nth_element(sorted.begin(), sorted.begin() + (cfg.k - 1), sorted.end(),
                     std::greater<float>());
    const float kth = sorted[cfg.k - 1];
    sum = 0.0;
    for (float f : v) {
      if (f >= kth) sum += f;
    }
  }
  return sum / static_cast<double>(cfg.k);
}

double l1_loss(const Heatmap& est, const Heatmap& gt) {
  if (!(est.dims() == gt.dims())) throw ValidationError("l1_loss: dims mismatch");
  double sum = 0.0;
  const auto& a = est.values();
  const auto& b = gt.values();
  for (size_t i = 0; i < a.size(); ++i) sum += std::abs(static_cast<double>(b[i]) - a[i]);
  return sum / static_cast<double>(est.dims().pixel_count());
}

double total_loss_1ch(const std::vector<PerImageLoss1Ch>& per_image) {
  if (per_image.empty()) throw ValidationError("total_loss_1ch: empty batch");
  double sum = 0.0;
  for (const auto& it : per_image) sum += 0.4 * it.reg + it.seg;
  return sum / static_cast<double>(per_image.size());
}

double total_loss_3ch(const std::vector<PerImageLoss3Ch>& per_image) {
  if (per_image.empty()) throw ValidationError("total_loss_3ch: empty batch");
  double sum = 0.0;
  for (const auto& it : per_image) sum += 0.2 * it.dist + 20.0 * it.prob + it.seg;
  return sum / static_cast<double>(per_image.size());
}

}  // namespace tpe
