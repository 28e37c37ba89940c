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

#include "panokit/erp_geometry.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "panokit/errors.h"
#include "test_util.h"

namespace panokit {
namespace {

constexpr double kTol = 1e-9;

TEST(PixelToSphericalTest, EvaluatesPixelCentres) {
  const ErpGrid small = ErpGrid::Make(2, 4);
  SphericalPoint p = PixelToSpherical(small, 1, 1);
  EXPECT_NEAR(p.latitude, 45.0, kTol);
  EXPECT_NEAR(p.longitude, -135.0, kTol);
  p = PixelToSpherical(small, 2, 3);
  EXPECT_NEAR(p.latitude, -45.0, kTol);
  EXPECT_NEAR(p.longitude, 45.0, kTol);
  p = PixelToSpherical(ErpGrid::Make(180, 360), 90, 180);
  EXPECT_NEAR(p.latitude, 0.5, kTol);
  EXPECT_NEAR(p.longitude, -0.5, kTol);
}

TEST(PixelToSphericalTest, RejectsOutOfRangeIndices) {
  const ErpGrid grid = ErpGrid::Make(2, 4);
  EXPECT_THROW(PixelToSpherical(grid, 0, 1), InputError);
  EXPECT_THROW(PixelToSpherical(grid, 3, 1), InputError);
  EXPECT_THROW(PixelToSpherical(grid, 1, 5), InputError);
  EXPECT_THROW(ErpGrid::Make(0, 4), InputError);
}

TEST(SphericalToPixelTest, InvertsExamples) {
  const ErpGrid grid = ErpGrid::Make(2, 4);
  FractionalPixel px = SphericalToPixel(grid, {45.0, -135.0});
  EXPECT_NEAR(px.h, 1.0, kTol);
  EXPECT_NEAR(px.w, 1.0, kTol);
  px = SphericalToPixel(grid, {-45.0, 45.0});
  EXPECT_NEAR(px.h, 2.0, kTol);
  EXPECT_NEAR(px.w, 3.0, kTol);
  px = SphericalToPixel(ErpGrid::Make(180, 360), {0.5, -0.5});
  EXPECT_NEAR(px.h, 90.0, kTol);
  EXPECT_NEAR(px.w, 180.0, kTol);
}

TEST(SphericalToPixelTest, ApproachesSeamFromTheLastColumn) {
  const ErpGrid grid = ErpGrid::Make(2, 4);
  const FractionalPixel px = SphericalToPixel(grid, {0.0, 179.999});
  // (179.999 + 180) * 4 / 360 + 0.5
  EXPECT_NEAR(px.w, 4.4999888888888889, 1e-12);
  EXPECT_LT(px.w, 4.5);
  // The same direction written past the seam wraps to the far side.
  const SphericalPoint wrapped = SphericalPoint::Make(0.0, 180.001);
  EXPECT_NEAR(wrapped.longitude, -179.999, 1e-9);
  EXPECT_NEAR(SphericalToPixel(grid, wrapped).w, 0.5000111111111111, 1e-12);
  EXPECT_THROW(SphericalToPixel(grid, {0.0, 180.0}), InputError);
  EXPECT_THROW(SphericalToPixel(grid, {91.0, 0.0}), InputError);
}

TEST(SphericalToPixelTest, RoundTripsEveryPixelCentre) {
  for (auto [H, W] : {std::pair{2, 4}, std::pair{7, 13}, std::pair{64, 128}}) {
    const ErpGrid grid = ErpGrid::Make(H, W);
    for (int h = 1; h <= H; ++h) {
      for (int w = 1; w <= W; ++w) {
        const FractionalPixel px =
            SphericalToPixel(grid, PixelToSpherical(grid, h, w));
        ASSERT_NEAR(px.h, h, kTol);
        ASSERT_NEAR(px.w, w, kTol);
      }
    }
  }
}

TEST(SphericalToPixelTest, FirstAndLastColumnsAreOneStepApart) {
  const ErpGrid grid = ErpGrid::Make(5, 12);
  const double first = PixelToSpherical(grid, 3, 1).longitude;
  const double last = PixelToSpherical(grid, 3, 12).longitude;
  EXPECT_NEAR(WrapLongitude(first - last), 360.0 / 12, kTol);
}

TEST(SliceViewsTest, EnumeratesFiftyPercentStrideWindows) {
  const auto views = SliceViews(ErpGrid::Make(4, 8));
  const int starts[] = {1, 3, 5, 7};
  for (int k = 0; k < 4; ++k) {
    EXPECT_EQ(views[k].start_column, starts[k]);
    EXPECT_EQ(views[k].side, 4);
    EXPECT_EQ(views[k].wraps, k == 3);
  }
  const auto tiny = SliceViews(ErpGrid::Make(2, 4));
  for (int k = 0; k < 4; ++k) {
    EXPECT_EQ(tiny[k].start_column, k + 1);
    EXPECT_EQ(tiny[k].side, 2);
    EXPECT_EQ(tiny[k].wraps, k == 3);
  }
}

TEST(SliceViewsTest, CoversEveryColumnTwice) {
  for (int H : {2, 4, 10, 64}) {
    const ErpGrid grid = ErpGrid::Make(H, 2 * H);
    const auto views = SliceViews(grid);
    std::vector<int> coverage(grid.width + 1, 0);
    bool seam_pair_in_wrapping_view = false;
    for (const SliceView& view : views) {
      bool has_first = false;
      bool has_last = false;
      for (int x = 1; x <= view.side; ++x) {
        const int w = SliceToErpCoords(view, grid, x, 1).w;
        ++coverage[w];
        has_first |= w == 1;
        has_last |= w == grid.width;
      }
      if (view.wraps && has_first && has_last) {
        seam_pair_in_wrapping_view = true;
      }
    }
    for (int w = 1; w <= grid.width; ++w) EXPECT_EQ(coverage[w], 2) << w;
    EXPECT_TRUE(seam_pair_in_wrapping_view);
  }
}

TEST(SliceViewsTest, RejectsUnsupportedShapes) {
  EXPECT_THROW(SliceViews(ErpGrid::Make(4, 9)), InputError);
  EXPECT_THROW(SliceViews(ErpGrid::Make(3, 6)), InputError);
}

TEST(SliceToErpCoordsTest, WrapsThroughTheSeam) {
  const ErpGrid grid = ErpGrid::Make(4, 8);
  const SliceView first{1, 4, false};
  const SliceView seam{7, 4, true};
  EXPECT_EQ(SliceToErpCoords(first, grid, 1, 1), (PixelIndex{1, 1}));
  EXPECT_EQ(SliceToErpCoords(seam, grid, 3, 2), (PixelIndex{2, 1}));
  EXPECT_EQ(SliceToErpCoords(seam, grid, 2, 4), (PixelIndex{4, 8}));
  EXPECT_THROW(SliceToErpCoords(seam, grid, 5, 1), InputError);
  EXPECT_THROW(SliceToErpCoords(seam, grid, 1, 0), InputError);
}

TEST(ExtractSliceTest, ConstantImageStaysConstant) {
  const ErpGrid grid = ErpGrid::Make(4, 8);
  const Image image(4, 8, 3, 77);
  const Image crop = ExtractSlice(image, grid, SliceViews(grid)[1]);
  EXPECT_EQ(crop, Image(4, 4, 3, 77));
}

TEST(ExtractSliceTest, WrappingViewSwapsHalves) {
  const ErpGrid grid = ErpGrid::Make(4, 8);
  Image image(4, 8, 1, 0);
  for (int r = 0; r < 4; ++r) {
    for (int c = 4; c < 8; ++c) image.at(r, c) = 1;
  }
  const Image crop = ExtractSlice(image, grid, SliceViews(grid)[3]);
  for (int r = 0; r < 4; ++r) {
    EXPECT_EQ(crop.at(r, 0), 1);
    EXPECT_EQ(crop.at(r, 1), 1);
    EXPECT_EQ(crop.at(r, 2), 0);
    EXPECT_EQ(crop.at(r, 3), 0);
  }
}

TEST(ExtractSliceTest, MatchesDirectIndexingOnRandomImages) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> byte(0, 255);
  for (int H : {2, 4, 6, 12}) {
    const ErpGrid grid = ErpGrid::Make(H, 2 * H);
    Image image(H, 2 * H, 3);
    for (auto& v : image.data) v = static_cast<std::uint8_t>(byte(rng));
    for (const SliceView& view : SliceViews(grid)) {
      const Image crop = ExtractSlice(image, grid, view);
      for (int y = 0; y < H; ++y) {
        for (int x = 0; x < H; ++x) {
          const int col = (view.start_column - 1 + x) % grid.width;
          for (int ch = 0; ch < 3; ++ch) {
            ASSERT_EQ(crop.at(y, x, ch), image.at(y, col, ch));
          }
        }
      }
    }
  }
}

TEST(ExtractSliceTest, RejectsSizeMismatch) {
  const ErpGrid grid = ErpGrid::Make(4, 8);
  EXPECT_THROW(ExtractSlice(Image(4, 6, 1), grid, SliceViews(grid)[0]),
               InputError);
}

TEST(PerspectiveTest, ConstantImageGivesConstantView) {
  const Image erp(16, 32, 3, 200);
  for (const SphericalPoint& c :
       {SphericalPoint{0, 0}, SphericalPoint{75, 170}, SphericalPoint{-89, -30}}) {
    EXPECT_EQ(ErpToPerspective(erp, c, 100.0, 9), Image(9, 9, 3, 200));
  }
}

TEST(PerspectiveTest, CentrePixelSamplesTheViewCentre) {
  // The 2x2 block around (0, 0) on a 16x32 grid holds 90; everything else 10.
  Image erp(16, 32, 1, 10);
  for (int r = 7; r <= 8; ++r) {
    for (int c = 15; c <= 16; ++c) erp.at(r, c) = 90;
  }
  const Image view = ErpToPerspective(erp, {0.0, 0.0}, 90.0, 9);
  EXPECT_EQ(view.at(4, 4), 90);
  EXPECT_EQ(view.at(0, 0), 10);
}

TEST(PerspectiveTest, RejectsInvalidFieldOfView) {
  const Image erp(4, 8, 1);
  EXPECT_THROW(ErpToPerspective(erp, {0, 0}, 0.0, 4), InputError);
  EXPECT_THROW(ErpToPerspective(erp, {0, 0}, 180.0, 4), InputError);
  EXPECT_THROW(ErpToPerspective(erp, {0, 0}, 90.0, 0), InputError);
}

TEST(PerspectiveTest, ForwardAndBackwardProjectionsAgree) {
  const PerspectiveView view({20.0, -150.0}, 75.0, 64);
  for (double x = 0.5; x <= 64.5; x += 3.25) {
    for (double y = 0.5; y <= 64.5; y += 3.25) {
      const auto back = view.DirectionToPixel(view.PixelToDirection(x, y));
      ASSERT_TRUE(back.has_value());
      EXPECT_NEAR((*back)[0], x, 1e-9);
      EXPECT_NEAR((*back)[1], y, 1e-9);
    }
  }
  // The antipode is behind the camera.
  EXPECT_FALSE(view.DirectionToPixel({-20.0, 30.0}).has_value());
}

TEST(PerspectiveTest, PixelRoundTripErrorIsBelowHalfADegree) {
  const int side = 256;
  std::vector<PerspectiveView> faces;
  for (const auto& c : CubemapCenters()) faces.emplace_back(c, 90.0, side);
  double worst = 0.0;
  for (double lat = -60.0; lat <= 60.0; lat += 2.5) {
    for (double lon = -180.0; lon < 180.0; lon += 3.75) {
      const SphericalPoint p{lat, lon};
      bool seen = false;
      for (const auto& face : faces) {
        const auto px = face.DirectionToPixel(p);
        if (!px) continue;
        seen = true;
        const double x = std::clamp(std::round((*px)[0]), 1.0, double{side});
        const double y = std::clamp(std::round((*px)[1]), 1.0, double{side});
        worst = std::max(worst,
                         AngularDistance(p, face.PixelToDirection(x, y)));
      }
      ASSERT_TRUE(seen) << lat << ", " << lon;
    }
  }
  EXPECT_LE(worst, 0.5);
}

TEST(PerspectiveTest, CubeFacesTileTheSphere) {
  std::vector<PerspectiveView> faces;
  for (const auto& c : CubemapCenters()) faces.emplace_back(c, 90.0, 8);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> lon(-180.0, 180.0);
  for (int i = 0; i < 5000; ++i) {
    const SphericalPoint p = SphericalPoint::Make(
        std::asin(unit(rng)) * 180.0 / std::numbers::pi, lon(rng));
    int hits = 0;
    for (const auto& face : faces) hits += face.DirectionToPixel(p).has_value();
    ASSERT_GE(hits, 1) << p.latitude << ", " << p.longitude;
  }
  // Poles included.
  for (double lat : {90.0, -90.0}) {
    int hits = 0;
    for (const auto& face : faces) {
      hits += face.DirectionToPixel({lat, 0.0}).has_value();
    }
    EXPECT_GE(hits, 1);
  }
}

TEST(SliceViewJsonTest, SerializesManifestRecord) {
  const nlohmann::json j = SliceView{7, 4, true};
  EXPECT_EQ(j.dump(), R"({"side":4,"start_column":7,"wraps":true})");
  EXPECT_EQ(j.get<SliceView>(), (SliceView{7, 4, true}));
}

}  // namespace
}  // namespace panokit
