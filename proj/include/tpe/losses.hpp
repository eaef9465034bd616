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

#include "tpe/geometry.hpp"

namespace tpe {

struct LossConfig {
  double t_k = 0.3;     // fixed per-pixel loss floor for the bootstrapped CE
  long long k = 8192;   // minimum number of pixels kept
  int batch_size = 1;
};

/// Per-pixel cross entropy -log(p_true), clamped below by -log(1e-12).
/// `prob` holds one grid per class; per-pixel probabilities must sum to 1
/// within 1e-4.
Heatmap pixel_ce(const std::vector<Heatmap>& prob, const SegMask& labels);

/// Bootstrapped cross entropy: keep all pixels with loss > t_K; if fewer than
/// K qualify, keep the K largest instead (ties at the K-th value all kept).
/// Returns (sum of kept losses) / K.
double bootstrapped_ce(const Heatmap& loss_grid, const LossConfig& cfg);

/// Mean absolute difference over the grid: (1/(W*H)) * sum |gt - est|.
double l1_loss(const Heatmap& est, const Heatmap& gt);

struct PerImageLoss1Ch {
  double reg = 0.0;
  double seg = 0.0;
};

struct PerImageLoss3Ch {
  double dist = 0.0;
  double prob = 0.0;
  double seg = 0.0;
};

/// Batch loss for the 1-channel design: mean of 0.4*reg + seg.
double total_loss_1ch(const std::vector<PerImageLoss1Ch>& per_image);

/// Batch loss for the 3-channel design: mean of 0.2*dist + 20*prob + seg.
double total_loss_3ch(const std::vector<PerImageLoss3Ch>& per_image);

}  // namespace tpe
