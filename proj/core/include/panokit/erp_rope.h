// Copyright 2026 The Panokit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PANOKIT_ERP_ROPE_H_
#define PANOKIT_ERP_ROPE_H_

#include <span>
#include <string>
#include <vector>

#include "nlohmann/json.hpp"
#include "panokit/erp_geometry.h"

namespace panokit {

// Circular horizontal index of ERP column w (any integer, reduced modulo W
// into [1, W]). For W = 8 the columns map to 1 2 3 4 5 4 3 2 and for W = 5
// to 1 2 3 3 2: the seam column is the minimum, its two circular neighbours
// share a value, and the value grows towards the column opposite the seam.
// Throws InputError when W < 1.
int HorizontalIndex(long long w, int width);

// Global latitude scale: H divided by the sum of cos(latitude) over the
// grid's rows, so that sum_h cos(lat_h) * W * scale == H * W.
double LatitudeScale(const ErpGrid& grid);

// Encoded 2D positions of every token. Encodings are separable: token
// (h, w) sits at (rows[h - 1], columns[w - 1]).
struct PositionGrid {
  ErpGrid grid;
  double gamma = 1.0;
  std::vector<double> rows;     // g(h)
  std::vector<double> columns;  // gamma * f(w), or w for the mRoPE grid
};

struct Position2D {
  double vertical = 0.0;
  double horizontal = 0.0;
};

inline Position2D PositionAt(const PositionGrid& grid, int h, int w) {
  return {grid.rows[h - 1], grid.columns[w - 1]};
}

// (h, gamma * f(w)) for every token.
PositionGrid ErpPositionGrid(const ErpGrid& grid);

// Identity (h, w) grid with gamma = 1; the baseline for perspective inputs.
PositionGrid MRopePositionGrid(const ErpGrid& grid);

void to_json(nlohmann::json& j, const PositionGrid& grid);

struct RotaryConfig {
  int head_dim = 64;
  double base = 10000.0;
  // Fraction of the head_dim / 2 channel pairs that rotate with the
  // vertical position. The first pairs are vertical, the rest horizontal.
  double axis_split = 0.5;

  // Throws InputError for odd or non-positive head_dim, base <= 0, or
  // axis_split outside [0, 1].
  void Validate() const;
  int VerticalPairs() const;
  int HorizontalPairs() const { return head_dim / 2 - VerticalPairs(); }
};

// Rotates each channel pair (2i, 2i + 1) by position * omega, where
// omega_j = base^(-2j / d_axis) counts j within the pair's axis and d_axis is
// twice that axis's pair count. Positions may be fractional.
std::vector<double> RopeRotate(std::span<const double> vector,
                               const Position2D& position,
                               const RotaryConfig& config);

// <rotate(q, pos_q), rotate(k, pos_k)>. Depends only on pos_q - pos_k.
double AttentionLogit(std::span<const double> q, std::span<const double> k,
                      const Position2D& pos_q, const Position2D& pos_k,
                      const RotaryConfig& config);

struct PropertyCheck {
  std::string property;
  int width = 0;
  bool pass = false;
  std::string details;
};

void to_json(nlohmann::json& j, const PropertyCheck& check);

// Evaluates periodicity, boundary consistency, symmetry and centre maximum
// of HorizontalIndex for one width. Failures are reported, never thrown;
// only W < 2 is rejected with InputError.
std::vector<PropertyCheck> CheckProperties(int width);

}  // namespace panokit

#endif  // PANOKIT_ERP_ROPE_H_
