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

#include "panokit/erp_rope.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "panokit/errors.h"

namespace panokit {

int HorizontalIndex(long long w, int width) {
  if (width < 1) {
    throw InputError("ERP width must be at least 1, got " +
                     std::to_string(width));
  }
  long long r = (w - 1) % width;
  if (r < 0) r += width;
  const int column = static_cast<int>(r) + 1;
  // Rising 1, 2, ... up to the centre, then descending back to 2.
  return std::min(column, width + 2 - column);
}

double LatitudeScale(const ErpGrid& grid) {
  const ErpGrid checked = ErpGrid::Make(grid.height, grid.width);
  double cos_sum = 0.0;
  for (int h = 1; h <= checked.height; ++h) {
    cos_sum += std::cos(checked.RowLatitude(h) * std::numbers::pi / 180.0);
  }
  return checked.height / cos_sum;
}

PositionGrid ErpPositionGrid(const ErpGrid& grid) {
  PositionGrid out;
  out.grid = ErpGrid::Make(grid.height, grid.width);
  out.gamma = LatitudeScale(out.grid);
  out.rows.resize(out.grid.height);
  out.columns.resize(out.grid.width);
  for (int h = 1; h <= out.grid.height; ++h) out.rows[h - 1] = h;
  for (int w = 1; w <= out.grid.width; ++w) {
    out.columns[w - 1] = out.gamma * HorizontalIndex(w, out.grid.width);
  }
  return out;
}

PositionGrid MRopePositionGrid(const ErpGrid& grid) {
  PositionGrid out;
  out.grid = ErpGrid::Make(grid.height, grid.width);
  out.gamma = 1.0;
  out.rows.resize(out.grid.height);
  out.columns.resize(out.grid.width);
  for (int h = 1; h <= out.grid.height; ++h) out.rows[h - 1] = h;
  for (int w = 1; w <= out.grid.width; ++w) out.columns[w - 1] = w;
  return out;
}

void to_json(nlohmann::json& j, const PositionGrid& grid) {
  j = nlohmann::json{{"H", grid.grid.height},
                     {"W", grid.grid.width},
                     {"gamma", grid.gamma},
                     {"g", grid.rows},
                     {"x", grid.columns}};
}

void RotaryConfig::Validate() const {
  if (head_dim <= 0 || head_dim % 2 != 0) {
    throw InputError("head_dim must be a positive even number, got " +
                     std::to_string(head_dim));
  }
  if (!(base > 0.0)) throw InputError("rotary base must be positive");
  if (!(axis_split >= 0.0 && axis_split <= 1.0)) {
    throw InputError("axis_split must lie in [0, 1]");
  }
}

int RotaryConfig::VerticalPairs() const {
  return static_cast<int>(std::lround(axis_split * (head_dim / 2)));
}

std::vector<double> RopeRotate(std::span<const double> vector,
                               const Position2D& position,
                               const RotaryConfig& config) {
  config.Validate();
  if (vector.size() != static_cast<std::size_t>(config.head_dim)) {
    throw InputError("vector length " + std::to_string(vector.size()) +
                     " does not match head_dim " +
                     std::to_string(config.head_dim));
  }
  const int vertical_pairs = config.VerticalPairs();
  const int horizontal_pairs = config.HorizontalPairs();
  std::vector<double> out(vector.begin(), vector.end());
  for (int pair = 0; pair < config.head_dim / 2; ++pair) {
    const bool vertical = pair < vertical_pairs;
    const int j = vertical ? pair : pair - vertical_pairs;
    const int axis_dim = 2 * (vertical ? vertical_pairs : horizontal_pairs);
    const double omega = std::pow(config.base, -2.0 * j / axis_dim);
    const double angle =
        (vertical ? position.vertical : position.horizontal) * omega;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double x = vector[2 * pair];
    const double y = vector[2 * pair + 1];
    out[2 * pair] = c * x - s * y;
    out[2 * pair + 1] = s * x + c * y;
  }
  return out;
}

double AttentionLogit(std::span<const double> q, std::span<const double> k,
                      const Position2D& pos_q, const Position2D& pos_k,
                      const RotaryConfig& config) {
  if (q.size() != k.size()) {
    throw InputError("query and key lengths differ");
  }
  const std::vector<double> rq = RopeRotate(q, pos_q, config);
  const std::vector<double> rk = RopeRotate(k, pos_k, config);
  double dot = 0.0;
  for (std::size_t i = 0; i < rq.size(); ++i) dot += rq[i] * rk[i];
  return dot;
}

void to_json(nlohmann::json& j, const PropertyCheck& check) {
  j = nlohmann::json{{"property", check.property},
                     {"W", check.width},
                     {"pass", check.pass},
                     {"details", check.details}};
}

std::vector<PropertyCheck> CheckProperties(int width) {
  if (width < 2) {
    throw InputError("property checks need W >= 2, got " +
                     std::to_string(width));
  }
  const int W = width;
  auto f = [W](long long w) { return HorizontalIndex(w, W); };
  std::vector<PropertyCheck> report;

  {
    PropertyCheck check{"periodicity", W, true, ""};
    for (int w = 1; w <= W && check.pass; ++w) {
      for (int k = -2; k <= 2; ++k) {
        if (f(w) != f(w + static_cast<long long>(k) * W)) {
          check.pass = false;
          check.details = "f(" + std::to_string(w) + ") != f(" +
                          std::to_string(w + k * W) + ")";
          break;
        }
      }
    }
    if (check.pass) check.details = "f(w) == f(w + kW) for k in [-2, 2]";
    report.push_back(std::move(check));
  }

  {
    const int a = f(2);
    const int b = f(W);
    PropertyCheck check{"boundary_consistency", W, a == b, ""};
    check.details = "f(2) = " + std::to_string(a) +
                    ", f(W) = " + std::to_string(b);
    report.push_back(std::move(check));
  }

  {
    PropertyCheck check{"symmetry", W, true, "f(w) == f(W + 2 - w) for w in [2, W]"};
    for (int w = 2; w <= W; ++w) {
      if (f(w) != f(W + 2 - w)) {
        check.pass = false;
        check.details = "f(" + std::to_string(w) + ") != f(" +
                        std::to_string(W + 2 - w) + ")";
        break;
      }
    }
    report.push_back(std::move(check));
  }

  {
    const int expected_max = W / 2 + 1;
    std::vector<int> expected_at = {W / 2 + 1};
    if (W % 2 != 0) expected_at.push_back(W / 2 + 2);
    int max_value = 0;
    std::vector<int> argmax;
    for (int w = 1; w <= W; ++w) {
      if (f(w) > max_value) {
        max_value = f(w);
        argmax.clear();
      }
      if (f(w) == max_value) argmax.push_back(w);
    }
    PropertyCheck check{"center_maximum", W,
                        max_value == expected_max && argmax == expected_at,
                        ""};
    std::ostringstream details;
    details << "max f = " << max_value << " at w in {";
    for (std::size_t i = 0; i < argmax.size(); ++i) {
      details << (i ? ", " : "") << argmax[i];
    }
    details << "}; expected " << expected_max
            << " (floor(W/2) + 1, one above W/2 = " << W / 2.0 << ")";
    check.details = details.str();
    report.push_back(std::move(check));
  }
  return report;
}

}  // namespace panokit
