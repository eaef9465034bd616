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

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tpe {

/// Raised when an input document or in-memory object violates a structural
/// invariant (bad polyline ordering, swapped rails, dimension mismatch, ...).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct GridDims {
  int width = 0;   // W, pixels
  int height = 0;  // H, pixels

  bool operator==(const GridDims&) const = default;
  long long pixel_count() const { return 1LL * width * height; }
};

inline void validate_dims(const GridDims& d) {
  if (d.width < 1 || d.height < 1)
    throw ValidationError("GridDims: width and height must be >= 1");
}

/// Dense row-major float grid. Used both for distance-valued maps (units:
/// pixels, values >= 0) and probability maps (values in [0,1]).
class Heatmap {
 public:
  Heatmap() = default;
  explicit Heatmap(GridDims dims, float fill = 0.0f)
      : dims_(dims), values_(static_cast<size_t>(dims.width) * dims.height, fill) {
    validate_dims(dims);
  }

  const GridDims& dims() const { return dims_; }
  int width() const { return dims_.width; }
  int height() const { return dims_.height; }

  float at(int x, int y) const { return values_[static_cast<size_t>(y) * dims_.width + x]; }
  float& at(int x, int y) { return values_[static_cast<size_t>(y) * dims_.width + x]; }

  const float* row(int y) const { return values_.data() + static_cast<size_t>(y) * dims_.width; }
  float* row(int y) { return values_.data() + static_cast<size_t>(y) * dims_.width; }

  const std::vector<float>& values() const { return values_; }
  std::vector<float>& values() { return values_; }

  bool operator==(const Heatmap&) const = default;

 private:
  GridDims dims_{};
  std::vector<float> values_;
};

enum class SegClass : uint8_t {
  kBackground = 0,
  kRailTrack = 1,
  kRailArea = 2,
};

/// 3-class segmentation mask (background / rail-track / rail-area).
class SegMask {
 public:
  SegMask() = default;
  explicit SegMask(GridDims dims, SegClass fill = SegClass::kBackground)
      : dims_(dims),
        classes_(static_cast<size_t>(dims.width) * dims.height,
                 static_cast<uint8_t>(fill)) {
    validate_dims(dims);
  }

  const GridDims& dims() const { return dims_; }
  int width() const { return dims_.width; }
  int height() const { return dims_.height; }

  SegClass at(int x, int y) const {
    return static_cast<SegClass>(classes_[static_cast<size_t>(y) * dims_.width + x]);
  }
  void set(int x, int y, SegClass c) {
    classes_[static_cast<size_t>(y) * dims_.width + x] = static_cast<uint8_t>(c);
  }
  uint8_t raw(int x, int y) const {
    return classes_[static_cast<size_t>(y) * dims_.width + x];
  }

  const std::vector<uint8_t>& classes() const { return classes_; }

  bool operator==(const SegMask&) const = default;

 private:
  GridDims dims_{};
  std::vector<uint8_t> classes_;
};

struct PolyPoint {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const PolyPoint&) const = default;
};

/// Ordered annotation polyline for one rail; y strictly monotone.
struct RailPolyline {
  std::vector<PolyPoint> points;
  bool operator==(const RailPolyline&) const = default;
};

struct Track {
  int id = 0;
  RailPolyline left;
  RailPolyline right;
  bool operator==(const Track&) const = default;
};

struct Scene {
  GridDims dims;
  std::vector<Track> tracks;
  bool operator==(const Scene&) const = default;
};

enum class TripletMode : uint8_t { kOneChannel = 0, kThreeChannel = 1 };

/// One row's (left rail x, center x, right rail x) for one track instance.
struct Triplet {
  int y = 0;
  double x_left = 0.0;
  double x_center = 0.0;
  double x_right = 0.0;
  TripletMode mode = TripletMode::kOneChannel;
  bool clamped = false;  // a rail position was clipped to the image bounds
  bool operator==(const Triplet&) const = default;
};

/// Linearly interpolated x per covered integer row. Rows outside the
/// polyline's y-range (or the image) are absent.
std::map<int, double> rasterize_polyline(const RailPolyline& poly, const GridDims& dims);

/// Rasterized (x_left, x_right) of a track on row y, present iff both rails
/// cover the row.
std::optional<std::pair<double, double>> rail_row_span(const Track& track, int y,
                                                       const GridDims& dims);

void validate_polyline(const RailPolyline& poly, const std::string& what);
void validate_track(const Track& track, const GridDims& dims);
void validate_scene(const Scene& scene);

}  // namespace tpe
