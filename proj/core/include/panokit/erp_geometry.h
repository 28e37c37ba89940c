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

#ifndef PANOKIT_ERP_GEOMETRY_H_
#define PANOKIT_ERP_GEOMETRY_H_

#include <array>
#include <optional>
#include <vector>

#include "nlohmann/json.hpp"
#include "panokit/image.h"

namespace panokit {

// Dimensions of an equirectangular (ERP) image or token grid.
//
// Rows and columns are 1-based and sampled at pixel centers:
//   latitude(h)  = 90 - (h - 0.5) * 180 / H      in (-90, 90)
//   longitude(w) = (w - 0.5) * 360 / W - 180     in [-180, 180)
// so no row sits exactly on a pole.
struct ErpGrid {
  int height = 1;
  int width = 1;

  // Throws InputError unless both dimensions are positive.
  static ErpGrid Make(int height, int width);

  double RowLatitude(int h) const;
  double ColumnLongitude(int w) const;

  friend bool operator==(const ErpGrid&, const ErpGrid&) = default;
};

// A direction on the unit sphere, in degrees.
struct SphericalPoint {
  double latitude = 0.0;   // [-90, 90]
  double longitude = 0.0;  // [-180, 180)

  // Validates latitude and wraps longitude into [-180, 180).
  static SphericalPoint Make(double latitude, double longitude);
};

// Wraps any longitude into [-180, 180).
double WrapLongitude(double longitude);

// Great-circle distance in degrees.
double AngularDistance(const SphericalPoint& a, const SphericalPoint& b);

struct FractionalPixel {
  double h = 0.0;
  double w = 0.0;
};

struct PixelIndex {
  int h = 0;
  int w = 0;
  friend bool operator==(const PixelIndex&, const PixelIndex&) = default;
};

SphericalPoint PixelToSpherical(const ErpGrid& grid, int h, int w);

// Inverse of PixelToSpherical at pixel centers. Results lie in
// [0.5, H + 0.5] x [0.5, W + 0.5); column W + 0.5 is the seam and wraps to
// column 0.5.
FractionalPixel SphericalToPixel(const ErpGrid& grid, const SphericalPoint& p);

// One square window over the ERP width. Columns start_column ..
// start_column + side - 1 are taken modulo W (1-based circular indexing).
struct SliceView {
  int start_column = 1;
  int side = 1;
  bool wraps = false;

  friend bool operator==(const SliceView&, const SliceView&) = default;
};

void to_json(nlohmann::json& j, const SliceView& view);
void from_json(const nlohmann::json& j, SliceView& view);

inline constexpr int kNumSliceViews = 4;

// The four 50%-stride square views of a 2:1 ERP image: three interior
// windows plus one stitched across the left/right seam. Requires W == 2H
// and even H; throws InputError otherwise.
std::array<SliceView, kNumSliceViews> SliceViews(const ErpGrid& grid);

// Maps slice coordinates (x = column, y = row, both 1-based) to ERP (h, w).
PixelIndex SliceToErpCoords(const SliceView& view, const ErpGrid& grid, int x,
                            int y);

// Crops `image` (whose size must match `grid`) through `view`.
Image ExtractSlice(const Image& image, const ErpGrid& grid,
                   const SliceView& view);

// Rectilinear (gnomonic) camera looking at `center`. Output pixels are
// 1-based (x to the right, y downward), sampled at pixel centers.
class PerspectiveView {
 public:
  // Throws InputError unless 0 < fov_degrees < 180 and out_side >= 1.
  PerspectiveView(const SphericalPoint& center, double fov_degrees,
                  int out_side);

  const SphericalPoint& center() const { return center_; }
  double fov_degrees() const { return fov_degrees_; }
  int out_side() const { return out_side_; }

  // Direction seen through fractional output pixel (x, y).
  SphericalPoint PixelToDirection(double x, double y) const;

  // Fractional output pixel a direction projects to, or nullopt when the
  // direction is behind the camera or outside the field of view.
  std::optional<std::array<double, 2>> DirectionToPixel(
      const SphericalPoint& p) const;

 private:
  SphericalPoint center_;
  double fov_degrees_;
  int out_side_;
  double half_extent_;  // tan(fov / 2)
  std::array<double, 3> forward_;
  std::array<double, 3> right_;
  std::array<double, 3> up_;
};

// Bilinear sample of `image` at fractional ERP pixel (h, w). Columns wrap
// around the seam; rows clamp at the poles.
std::vector<double> SampleBilinear(const Image& image, double h, double w);

// Resamples the ERP image through a PerspectiveView. fov 90 with the six
// axis-aligned centers yields a cubemap.
Image ErpToPerspective(const Image& image, const SphericalPoint& center,
                       double fov_degrees, int out_side);

// The six axis-aligned cubemap face centers: front, right, back, left, top,
// bottom.
std::array<SphericalPoint, 6> CubemapCenters();

}  // namespace panokit

#endif  // PANOKIT_ERP_GEOMETRY_H_
