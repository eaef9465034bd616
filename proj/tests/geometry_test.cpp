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

#include "tpe/geometry.hpp"

#include <doctest.h>

#include "tpe/rng.hpp"
#include "test_util.hpp"

using namespace tpe;
using namespace tpe::test;

TEST_CASE("rasterize_polyline: vertical line covers every row") {
  const auto m = rasterize_polyline(line(4, 0, 4, 7), {8, 8});
  REQUIRE(m.size() == 8);
  for (int y = 0; y < 8; ++y) CHECK(m.at(y) == doctest::Approx(4.0));
}

TEST_CASE("rasterize_polyline: 45 degree line interpolates exactly") {
  const auto m = rasterize_polyline(line(0, 0, 7, 7), {8, 8});
  REQUIRE(m.size() == 8);
  for (int y = 0; y < 8; ++y) CHECK(m.at(y) == doctest::Approx(y));
}

TEST_CASE("rasterize_polyline: interior interpolation") {
  // 2 + (3 - 1) * (6 - 2) / (5 - 1) = 4
  const auto m = rasterize_polyline(line(2, 1, 6, 5), {8, 8});
  CHECK(m.at(3) == doctest::Approx(4.0));
  CHECK(m.size() == 5);  // rows 1..5
  CHECK(m.count(0) == 0);
}

TEST_CASE("rasterize_polyline: entirely outside image yields empty map") {
  CHECK(rasterize_polyline(line(3, 10, 3, 20), {8, 8}).empty());
}

TEST_CASE("rasterize_polyline: multi-segment and descending order agree") {
  RailPolyline asc{{{1, 0}, {3, 4}, {3.5, 9}}};
  RailPolyline desc{{{3.5, 9}, {3, 4}, {1, 0}}};
  const auto a = rasterize_polyline(asc, {16, 16});
  const auto b = rasterize_polyline(desc, {16, 16});
  CHECK(a == b);
}

TEST_CASE("rasterize_polyline exact on straight segments (property)") {
  Pcg32 rng(42);
  for (int it = 0; it < 200; ++it) {
    const double x0 = rng.uniform(0, 100), x1 = rng.uniform(0, 100);
    double y0 = rng.uniform(0, 50), y1 = rng.uniform(51, 100);
    const auto m = rasterize_polyline(line(x0, y0, x1, y1), {128, 128});
    for (const auto& [y, x] : m) {
      const double expect = x0 + (y - y0) * (x1 - x0) / (y1 - y0);
      CHECK(std::abs(x - expect) < 1e-9);
    }
  }
}

TEST_CASE("rail_row_span basics") {
  const Track t = vertical_track(0, 2, 6, 0, 5);
  const auto span = rail_row_span(t, 3, {8, 8});
  REQUIRE(span.has_value());
  CHECK(span->first == doctest::Approx(2));
  CHECK(span->second == doctest::Approx(6));
  CHECK_FALSE(rail_row_span(t, 7, {8, 8}).has_value());
}

TEST_CASE("rail_row_span with converging rails") {
  Track t{0, line(2, 0, 4, 7), line(6, 0, 4.5, 7)};
  const auto span = rail_row_span(t, 0, {8, 8});
  REQUIRE(span.has_value());
  CHECK(span->first == doctest::Approx(2));
  CHECK(span->second == doctest::Approx(6));
}

TEST_CASE("validation: swapped rails rejected with the row named") {
  Scene s;
  s.dims = {8, 8};
  s.tracks.push_back(vertical_track(3, 6, 2, 0, 7));  // left > right
  CHECK_THROWS_WITH_AS(validate_scene(s),
                       doctest::Contains("track 3"), ValidationError);
  try {
    validate_scene(s);
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("row") != std::string::npos);
  }
}

TEST_CASE("validation: duplicate ids, out-of-bounds points, short polylines") {
  Scene s;
  s.dims = {8, 8};
  s.tracks.push_back(vertical_track(0, 2, 6, 0, 7));
  s.tracks.push_back(vertical_track(0, 1, 3, 0, 7));
  CHECK_THROWS_AS(validate_scene(s), ValidationError);

  Scene oob;
  oob.dims = {8, 8};
  oob.tracks.push_back(vertical_track(0, 2, 9, 0, 7));  // x = 9 outside
  CHECK_THROWS_AS(validate_scene(oob), ValidationError);

  RailPolyline single{{{1, 1}}};
  CHECK_THROWS_AS(validate_polyline(single, "t"), ValidationError);

  RailPolyline non_monotone{{{1, 0}, {2, 5}, {3, 5}}};
  CHECK_THROWS_AS(validate_polyline(non_monotone, "t"), ValidationError);
}
