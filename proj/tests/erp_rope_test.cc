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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "panokit/errors.h"
#include "test_util.h"

namespace panokit {
namespace {

// The column-index lists written out element by element: for odd W
// [1, 2, ..., (W+1)/2, (W+1)/2, (W+1)/2 - 1, ..., 3, 2], for even W
// [1, 2, ..., W/2 + 1, W/2, ..., 3, 2].
std::vector<int> IndexListOracle(int W) {
  std::vector<int> list;
  if (W % 2 != 0) {
    const int peak = (W + 1) / 2;
    for (int v = 1; v <= peak; ++v) list.push_back(v);
    for (int v = peak; v >= 2; --v) list.push_back(v);
  } else {
    for (int v = 1; v <= W / 2 + 1; ++v) list.push_back(v);
    for (int v = W / 2; v >= 2; --v) list.push_back(v);
  }
  return list;
}

// cos(theta_h) summed in long double, independent of LatitudeScale.
long double CosineSum(int H) {
  long double sum = 0.0L;
  for (int h = 1; h <= H; ++h) {
    const long double lat =
        std::numbers::pi_v<long double> / 2 -
        (h - 0.5L) * std::numbers::pi_v<long double> / H;
    sum += std::cos(lat);
  }
  return sum;
}

TEST(HorizontalIndexTest, MatchesPublishedLists) {
  const std::vector<int> eight = {1, 2, 3, 4, 5, 4, 3, 2};
  const std::vector<int> five = {1, 2, 3, 3, 2};
  for (int w = 1; w <= 8; ++w) EXPECT_EQ(HorizontalIndex(w, 8), eight[w - 1]);
  for (int w = 1; w <= 5; ++w) EXPECT_EQ(HorizontalIndex(w, 5), five[w - 1]);
  EXPECT_EQ(IndexListOracle(8), eight);
  EXPECT_EQ(IndexListOracle(5), five);
}

TEST(HorizontalIndexTest, MatchesListOracleForAllWidths) {
  for (int W = 1; W <= 600; ++W) {
    const std::vector<int> oracle = IndexListOracle(W);
    ASSERT_EQ(static_cast<int>(oracle.size()), W);
    for (int w = 1; w <= W; ++w) {
      ASSERT_EQ(HorizontalIndex(w, W), oracle[w - 1]) << "W=" << W;
    }
  }
}

TEST(HorizontalIndexTest, ExtendsPeriodically) {
  EXPECT_EQ(HorizontalIndex(17, 8), 1);
  EXPECT_EQ(HorizontalIndex(0, 8), 2);
  EXPECT_EQ(HorizontalIndex(-7, 8), 1);
  EXPECT_EQ(HorizontalIndex(1, 1), 1);
  EXPECT_EQ(HorizontalIndex(5, 1), 1);
  EXPECT_EQ(HorizontalIndex(1, 2), 1);
  EXPECT_EQ(HorizontalIndex(2, 2), 2);
  EXPECT_THROW(HorizontalIndex(1, 0), InputError);
}

TEST(HorizontalIndexTest, StructuralPropertiesHoldUpTo4096) {
  for (int W = 2; W <= 4096; ++W) {
    ASSERT_EQ(HorizontalIndex(1, W), 1);
    ASSERT_EQ(HorizontalIndex(2, W), HorizontalIndex(W, W));
    int max_value = 0;
    for (int w = 1; w <= W; ++w) {
      const int f = HorizontalIndex(w, W);
      max_value = std::max(max_value, f);
      if (w >= 2) ASSERT_EQ(f, HorizontalIndex(W + 2 - w, W));
      const int step = std::abs(HorizontalIndex(w + 1, W) - f);
      ASSERT_LE(step, 1);
      if (W % 2 == 0) ASSERT_EQ(step, 1);
    }
    ASSERT_EQ(max_value, W / 2 + 1);
  }
}

TEST(LatitudeScaleTest, EvaluatesSmallGrids) {
  EXPECT_DOUBLE_EQ(LatitudeScale(ErpGrid::Make(1, 1)), 1.0);
  EXPECT_NEAR(LatitudeScale(ErpGrid::Make(2, 4)), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(LatitudeScale(ErpGrid::Make(2, 4)), 1.414214, 1e-6);
}

TEST(LatitudeScaleTest, ApproachesHalfPi) {
  EXPECT_LE(std::abs(LatitudeScale(ErpGrid::Make(4096, 8192)) -
                     std::numbers::pi / 2),
            1e-6);
}

TEST(LatitudeScaleTest, RestoresTheTotalLatitudeLength) {
  for (int H = 1; H <= 4096; ++H) {
    const double gamma = LatitudeScale(ErpGrid::Make(H, 2 * H));
    const long double total = CosineSum(H) * gamma;
    ASSERT_LE(std::abs(static_cast<double>(total) - H), 1e-9 * H) << H;
    // Independent of the width.
    ASSERT_EQ(gamma, LatitudeScale(ErpGrid::Make(H, 7)));
  }
}

TEST(PositionGridTest, ComposesScaleAndIndex) {
  const PositionGrid small = ErpPositionGrid(ErpGrid::Make(2, 4));
  const double r2 = std::sqrt(2.0);
  EXPECT_NEAR(small.gamma, r2, 1e-12);
  ASSERT_EQ(small.rows, (std::vector<double>{1.0, 2.0}));
  const double expected[] = {r2, 2 * r2, 3 * r2, 2 * r2};
  for (int w = 0; w < 4; ++w) EXPECT_NEAR(small.columns[w], expected[w], 1e-12);

  const PositionGrid single = ErpPositionGrid(ErpGrid::Make(1, 1));
  EXPECT_EQ(single.rows, std::vector<double>{1.0});
  EXPECT_EQ(single.columns, std::vector<double>{1.0});

  const PositionGrid wide = ErpPositionGrid(ErpGrid::Make(2, 8));
  const int f[] = {1, 2, 3, 4, 5, 4, 3, 2};
  for (int w = 0; w < 8; ++w) EXPECT_NEAR(wide.columns[w], r2 * f[w], 1e-12);
}

TEST(PositionGridTest, EvenWidthColumnMultiset) {
  for (int W : {2, 4, 8, 30, 64}) {
    const PositionGrid grid = ErpPositionGrid(ErpGrid::Make(3, W));
    std::vector<double> got = grid.columns;
    std::vector<double> expected = {grid.gamma * 1};
    for (int v = 2; v <= W / 2; ++v) {
      expected.push_back(grid.gamma * v);
      expected.push_back(grid.gamma * v);
    }
    expected.push_back(grid.gamma * (W / 2 + 1));
    std::sort(got.begin(), got.end());
    std::sort(expected.begin(), expected.end());
    EXPECT_EQ(got, expected) << W;
  }
}

TEST(PositionGridTest, MRopeIsTheIdentityGrid) {
  const PositionGrid grid = MRopePositionGrid(ErpGrid::Make(2, 4));
  EXPECT_EQ(grid.gamma, 1.0);
  EXPECT_EQ(grid.columns, (std::vector<double>{1, 2, 3, 4}));
  EXPECT_EQ(grid.rows, (std::vector<double>{1, 2}));
  const PositionGrid one = MRopePositionGrid(ErpGrid::Make(1, 1));
  EXPECT_EQ(one.columns, std::vector<double>{1.0});
  const PositionGrid wide = MRopePositionGrid(ErpGrid::Make(5, 50));
  EXPECT_TRUE(std::is_sorted(wide.columns.begin(), wide.columns.end(),
                             std::less_equal<>()));
}

TEST(PositionGridTest, SerializesToJson) {
  const nlohmann::json j = MRopePositionGrid(ErpGrid::Make(1, 2));
  EXPECT_EQ(j.dump(), R"({"H":1,"W":2,"g":[1.0],"gamma":1.0,"x":[1.0,2.0]})");
}

TEST(RopeRotateTest, ZeroPositionIsIdentity) {
  std::mt19937 rng(1);
  const RotaryConfig config{16, 10000.0, 0.5};
  const auto v = testing::RandomVector(rng, 16);
  EXPECT_EQ(RopeRotate(v, {0.0, 0.0}, config), v);
}

TEST(RopeRotateTest, PreservesNorm) {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> pos(-500.0, 500.0);
  for (int i = 0; i < 200; ++i) {
    const RotaryConfig config{2 * (1 + i % 40), 100.0 + i * 37.0,
                              (i % 11) / 10.0};
    const auto v = testing::RandomVector(rng, config.head_dim);
    const auto r = RopeRotate(v, {pos(rng), pos(rng)}, config);
    double a = 0.0;
    double b = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      a += v[k] * v[k];
      b += r[k] * r[k];
    }
    ASSERT_NEAR(std::sqrt(b), std::sqrt(a), 1e-9);
  }
}

TEST(RopeRotateTest, MatchesExplicitRotationMatrices) {
  // head_dim 4: pair 0 is vertical, pair 1 horizontal, each axis has one
  // pair so omega_0 = base^0 = 1 on both.
  const RotaryConfig config{4, 10000.0, 0.5};
  const std::vector<double> v = {1.0, 0.0, 1.0, 0.0};
  const auto r = RopeRotate(v, {1.0, 1.0}, config);
  const double c = std::cos(1.0);
  const double s = std::sin(1.0);
  // [c -s; s c] * (1, 0) = (c, s)
  EXPECT_NEAR(r[0], c, 1e-15);
  EXPECT_NEAR(r[1], s, 1e-15);
  EXPECT_NEAR(r[2], c, 1e-15);
  EXPECT_NEAR(r[3], s, 1e-15);

  // head_dim 8: two pairs per axis, omegas 1 and base^(-1/2) = 0.01.
  const RotaryConfig wide{8, 10000.0, 0.5};
  const std::vector<double> u = {0.3, -1.2, 2.0, 0.5, -0.7, 0.1, 1.5, -2.5};
  const Position2D pos{3.0, 7.5};
  const auto got = RopeRotate(u, pos, wide);
  const double angles[] = {3.0 * 1.0, 3.0 * 0.01, 7.5 * 1.0, 7.5 * 0.01};
  for (int p = 0; p < 4; ++p) {
    const double cs = std::cos(angles[p]);
    const double sn = std::sin(angles[p]);
    EXPECT_NEAR(got[2 * p], cs * u[2 * p] - sn * u[2 * p + 1], 1e-12);
    EXPECT_NEAR(got[2 * p + 1], sn * u[2 * p] + cs * u[2 * p + 1], 1e-12);
  }
}

TEST(RopeRotateTest, RejectsBadConfigurations) {
  const std::vector<double> v(4, 1.0);
  EXPECT_THROW(RopeRotate(v, {}, RotaryConfig{6, 10000.0, 0.5}), InputError);
  EXPECT_THROW(RopeRotate(v, {}, RotaryConfig{3, 10000.0, 0.5}), InputError);
  EXPECT_THROW(RopeRotate(v, {}, RotaryConfig{4, -1.0, 0.5}), InputError);
  EXPECT_THROW(RopeRotate(v, {}, RotaryConfig{4, 10000.0, 1.5}), InputError);
}

TEST(RotaryConfigTest, SplitsPairsBetweenAxes) {
  EXPECT_EQ((RotaryConfig{64, 10000.0, 0.5}.VerticalPairs()), 16);
  EXPECT_EQ((RotaryConfig{64, 10000.0, 0.25}.VerticalPairs()), 8);
  EXPECT_EQ((RotaryConfig{64, 10000.0, 0.25}.HorizontalPairs()), 24);
  EXPECT_EQ((RotaryConfig{2, 10000.0, 0.0}.VerticalPairs()), 0);
  EXPECT_EQ((RotaryConfig{2, 10000.0, 1.0}.HorizontalPairs()), 0);
}

TEST(AttentionLogitTest, EqualPositionsGiveThePlainDotProduct) {
  std::mt19937 rng(3);
  const RotaryConfig config{32, 10000.0, 0.5};
  const auto q = testing::RandomVector(rng, 32);
  const auto k = testing::RandomVector(rng, 32);
  double dot = 0.0;
  for (int i = 0; i < 32; ++i) dot += q[i] * k[i];
  EXPECT_NEAR(AttentionLogit(q, k, {4.0, 9.5}, {4.0, 9.5}, config), dot, 1e-9);
}

TEST(AttentionLogitTest, DependsOnlyOnRelativePosition) {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> pos(-50.0, 50.0);
  for (int i = 0; i < 100; ++i) {
    const RotaryConfig config{2 * (2 + i % 16), 500.0 + 100.0 * i, 0.5};
    const auto q = testing::RandomVector(rng, config.head_dim);
    const auto k = testing::RandomVector(rng, config.head_dim);
    const Position2D a{pos(rng), pos(rng)};
    const Position2D b{pos(rng), pos(rng)};
    const Position2D shift{pos(rng), pos(rng)};
    const double base = AttentionLogit(q, k, a, b, config);
    const double moved = AttentionLogit(
        q, k, {a.vertical + shift.vertical, a.horizontal + shift.horizontal},
        {b.vertical + shift.vertical, b.horizontal + shift.horizontal},
        config);
    ASSERT_NEAR(moved, base, 1e-9);
  }
}

TEST(AttentionLogitTest, SeamNeighboursMatchInteriorNeighbours) {
  const PositionGrid grid = ErpPositionGrid(ErpGrid::Make(4, 8));
  std::mt19937 rng(5);
  const RotaryConfig config{16, 10000.0, 0.5};
  const auto q = testing::RandomVector(rng, 16);
  const double across_interior = AttentionLogit(
      q, q, PositionAt(grid, 2, 1), PositionAt(grid, 2, 2), config);
  const double across_seam = AttentionLogit(
      q, q, PositionAt(grid, 2, 1), PositionAt(grid, 2, 8), config);
  EXPECT_NEAR(across_interior, across_seam, 1e-9);
}

TEST(AttentionLogitTest, MirrorSymmetricNeighbourLogits) {
  std::mt19937 rng(6);
  const RotaryConfig config{24, 10000.0, 0.5};
  for (int W : {8, 12, 33, 64}) {
    const PositionGrid grid = ErpPositionGrid(ErpGrid::Make(3, W));
    const auto q = testing::RandomVector(rng, 24);
    const auto k = testing::RandomVector(rng, 24);
    for (int a = 2; 2 * a < W; ++a) {
      const double left = AttentionLogit(q, k, PositionAt(grid, 2, a),
                                         PositionAt(grid, 2, a + 1), config);
      const double right =
          AttentionLogit(q, k, PositionAt(grid, 2, W + 2 - a),
                         PositionAt(grid, 2, W + 1 - a), config);
      ASSERT_NEAR(left, right, 1e-9) << "W=" << W << " a=" << a;
    }
  }
}

TEST(AttentionLogitTest, RejectsLengthMismatch) {
  const RotaryConfig config{4, 10000.0, 0.5};
  const std::vector<double> q(4, 1.0);
  const std::vector<double> k(6, 1.0);
  EXPECT_THROW(AttentionLogit(q, k, {}, {}, config), InputError);
}

TEST(CheckPropertiesTest, ReportsEveryPropertyForPublishedWidths) {
  for (int W : {8, 5, 2}) {
    const auto report = CheckProperties(W);
    ASSERT_EQ(report.size(), 4u);
    for (const auto& check : report) {
      EXPECT_TRUE(check.pass) << check.property << " W=" << W << ": "
                              << check.details;
      EXPECT_EQ(check.width, W);
    }
  }
  EXPECT_EQ(CheckProperties(8)[3].details,
            "max f = 5 at w in {5}; expected 5 (floor(W/2) + 1, one above "
            "W/2 = 4)");
  EXPECT_NE(CheckProperties(5)[3].details.find("at w in {3, 4}"),
            std::string::npos);
  EXPECT_EQ(CheckProperties(2)[1].details, "f(2) = 2, f(W) = 2");
  EXPECT_THROW(CheckProperties(1), InputError);
}

TEST(CheckPropertiesTest, SerializesReport) {
  const nlohmann::json j = CheckProperties(8)[1];
  EXPECT_EQ(j.dump(),
            R"({"W":8,"details":"f(2) = 2, f(W) = 2","pass":true,)"
            R"("property":"boundary_consistency"})");
}

}  // namespace
}  // namespace panokit
