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

namespace tpe {

/// PCG32 (XSH-RR variant, O'Neill 2014) with a fixed stream constant.
/// Chosen over std::mt19937 + std:: distributions because every output below
/// is specified bit-for-bit, so fixtures generated from a seed are identical
/// on every platform, compiler, and standard library:
///   state' = state * 6364136223846793005 + 1442695040888963407
///   output = rotr32((state ^ (state >> 18)) >> 27, state >> 59)
/// uniform doubles take the top 53 bits / 2^53; Gaussians use the polar
/// Box-Muller transform with the spare value cached.
class Pcg32 {
 public:
  explicit Pcg32(uint64_t seed) : state_(0) {
    next_u32();
    state_ += seed;
    next_u32();
  }

  uint32_t next_u32() {
    const uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + 1442695040888963407ULL;
    const uint32_t xorshifted = static_cast<uint32_t>(((old >> 18) ^ old) >> 27);
    const uint32_t rot = static_cast<uint32_t>(old >> 59);
    return (xorshifted >> rot) | (xorshifted << ((32 - rot) & 31));
  }

  /// Uniform in [0, 1).
  double next_double() {
    const uint64_t hi = static_cast<uint64_t>(next_u32());
    const uint64_t lo = static_cast<uint64_t>(next_u32());
    return static_cast<double>(((hi << 32) | lo) >> 11) * (1.0 / 9007199254740992.0);
  }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Standard normal via polar Box-Muller.
  double gaussian();

 private:
  uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace tpe
