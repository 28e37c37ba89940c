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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "panokit/errors.h"

namespace panokit {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

using Vec3 = std::array<double, 3>;

Vec3 ToUnitVector(const SphericalPoint& p) {
  const double lat = p.latitude * kDegToRad;
  const double lon = p.longitude * kDegToRad;
  return {std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon),
          std::sin(lat)};
}

SphericalPoint FromVector(const Vec3& v) {
  const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  const double lat = std::asin(std::clamp(v[2] / norm, -1.0, 1.0));
  const double lon = std::atan2(v[1], v[0]);
  return SphericalPoint::Make(lat * kRadToDeg, lon * kRadToDeg);
}

double Dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

int WrapColumn(long long w, int width) {
  long long r = (w - 1) % width;
  if (r < 0) r += width;
  return static_cast<int>(r) + 1;
}

void CheckGrid(const ErpGrid& grid) {
  if (grid.height < 1 || grid.width < 1) {
    throw InputError("ERP grid must have positive dimensions, got " +
                     std::to_string(grid.height) + "x" +
                     std::to_string(grid.width));
  }
}

}  // namespace

ErpGrid ErpGrid::Make(int height, int width) {
  ErpGrid grid{height, width};
  CheckGrid(grid);
  return grid;
}

double ErpGrid::RowLatitude(int h) const {
  return 90.0 - (h - 0.5) * (180.0 / height);
}

double ErpGrid::ColumnLongitude(int w) const {
  return (w - 0.5) * (360.0 / width) - 180.0;
}

double WrapLongitude(double longitude) {
  double x = std::fmod(longitude + 180.0, 360.0);
  if (x < 0.0) x += 360.0;
  double wrapped = x - 180.0;
  if (wrapped >= 180.0) wrapped -= 360.0;
  return wrapped;
}

SphericalPoint SphericalPoint::Make(double latitude, double longitude) {
  if (!(latitude >= -90.0 && latitude <= 90.0) || !std::isfinite(longitude)) {
    throw InputError("latitude must lie in [-90, 90] and longitude must be "
                     "finite, got (" +
                     std::to_string(latitude) + ", " +
                     std::to_string(longitude) + ")");
  }
  return {latitude, WrapLongitude(longitude)};
}

double AngularDistance(const SphericalPoint& a, const SphericalPoint& b) {
  const Vec3 u = ToUnitVector(a);
  const Vec3 v = ToUnitVector(b);
  // atan2 of |u x v| and u.v stays accurate for tiny angles.
  const Vec3 c = {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
                  u[0] * v[1] - u[1] * v[0]};
  const double cross = std::sqrt(Dot(c, c));
  return std::atan2(cross, Dot(u, v)) * kRadToDeg;
}

SphericalPoint PixelToSpherical(const ErpGrid& grid, int h, int w) {
  CheckGrid(grid);
  if (h < 1 || h > grid.height || w < 1 || w > grid.width) {
    throw InputError("pixel (" + std::to_string(h) + ", " + std::to_string(w) +
                     ") is outside the " + std::to_string(grid.height) + "x" +
                     std::to_string(grid.width) + " grid");
  }
  return {grid.RowLatitude(h), grid.ColumnLongitude(w)};
}

FractionalPixel SphericalToPixel(const ErpGrid& grid,
                                 const SphericalPoint& p) {
  CheckGrid(grid);
  if (!(p.latitude >= -90.0 && p.latitude <= 90.0) ||
      !(p.longitude >= -180.0 && p.longitude < 180.0)) {
    throw InputError("spherical point out of range: (" +
                     std::to_string(p.latitude) + ", " +
                     std::to_string(p.longitude) + ")");
  }
  return {(90.0 - p.latitude) * grid.height / 180.0 + 0.5,
          (p.longitude + 180.0) * grid.width / 360.0 + 0.5};
}

void to_json(nlohmann::json& j, const SliceView& view) {
  j = nlohmann::json{{"start_column", view.start_column},
                     {"side", view.side},
                     {"wraps", view.wraps}};
}

void from_json(const nlohmann::json& j, SliceView& view) {
  j.at("start_column").get_to(view.start_column);
  j.at("side").get_to(view.side);
  j.at("wraps").get_to(view.wraps);
}

std::array<SliceView, kNumSliceViews> SliceViews(const ErpGrid& grid) {
  CheckGrid(grid);
  if (grid.width != 2 * grid.height) {
    throw InputError("slicing supports only 2:1 ERP images, got " +
                     std::to_string(grid.height) + "x" +
                     std::to_string(grid.width));
  }
  if (grid.height % 2 != 0) {
    throw InputError("slicing needs an even height for a 50% stride, got " +
                     std::to_string(grid.height));
  }
  const int side = grid.height;
  const int stride = side / 2;
  std::array<SliceView, kNumSliceViews> views;
  for (int k = 0; k < kNumSliceViews; ++k) {
    const int start = 1 + k * stride;
    views[k] = {start, side, start + side - 1 > grid.width};
  }
  return views;
}

PixelIndex SliceToErpCoords(const SliceView& view, const ErpGrid& grid, int x,
                            int y) {
  CheckGrid(grid);
  if (x < 1 || x > view.side || y < 1 || y > view.side) {
    throw InputError("slice coordinate (" + std::to_string(x) + ", " +
                     std::to_string(y) + ") is outside a view of side " +
                     std::to_string(view.side));
  }
  if (view.side > grid.height) {
    throw InputError("slice view taller than the ERP grid");
  }
  return {y, WrapColumn(static_cast<long long>(view.start_column) + x - 1,
                        grid.width)};
}

Image ExtractSlice(const Image& image, const ErpGrid& grid,
                   const SliceView& view) {
  if (image.rows != grid.height || image.cols != grid.width) {
    throw InputError("image is " + std::to_string(image.rows) + "x" +
                     std::to_string(image.cols) + " but the grid is " +
                     std::to_string(grid.height) + "x" +
                     std::to_string(grid.width));
  }
  Image out(view.side, view.side, image.channels);
  for (int y = 1; y <= view.side; ++y) {
    for (int x = 1; x <= view.side; ++x) {
      const PixelIndex src = SliceToErpCoords(view, grid, x, y);
      for (int ch = 0; ch < image.channels; ++ch) {
        out.at(y - 1, x - 1, ch) = image.at(src.h - 1, src.w - 1, ch);
      }
    }
  }
  return out;
}

PerspectiveView::PerspectiveView(const SphericalPoint& center,
                                 double fov_degrees, int out_side)
    : center_(SphericalPoint::Make(center.latitude, center.longitude)),
      fov_degrees_(fov_degrees),
      out_side_(out_side) {
  if (!(fov_degrees > 0.0 && fov_degrees < 180.0)) {
    throw InputError("field of view must lie in (0, 180) degrees, got " +
                     std::to_string(fov_degrees));
  }
  if (out_side < 1) {
    throw InputError("output side must be at least 1, got " +
                     std::to_string(out_side));
  }
  half_extent_ = std::tan(0.5 * fov_degrees * kDegToRad);
  const double lat = center_.latitude * kDegToRad;
  const double lon = center_.longitude * kDegToRad;
  forward_ = ToUnitVector(center_);
  right_ = {-std::sin(lon), std::cos(lon), 0.0};
  up_ = {-std::sin(lat) * std::cos(lon), -std::sin(lat) * std::sin(lon),
         std::cos(lat)};
}

SphericalPoint PerspectiveView::PixelToDirection(double x, double y) const {
  const double u = (2.0 * (x - 0.5) / out_side_ - 1.0) * half_extent_;
  const double v = (1.0 - 2.0 * (y - 0.5) / out_side_) * half_extent_;
  Vec3 ray;
  for (int i = 0; i < 3; ++i) {
    ray[i] = forward_[i] + u * right_[i] + v * up_[i];
  }
  return FromVector(ray);
}

std::optional<std::array<double, 2>> PerspectiveView::DirectionToPixel(
    const SphericalPoint& p) const {
  const Vec3 d = ToUnitVector(p);
  const double depth = Dot(d, forward_);
  if (depth <= 0.0) return std::nullopt;
  const double u = Dot(d, right_) / depth;
  const double v = Dot(d, up_) / depth;
  // The frame edge belongs to the view; allow for rounding on it.
  const double edge = half_extent_ * (1.0 + 1e-12);
  if (std::abs(u) > edge || std::abs(v) > edge) {
    return std::nullopt;
  }
  const double x = (u / half_extent_ + 1.0) * 0.5 * out_side_ + 0.5;
  const double y = (1.0 - v / half_extent_) * 0.5 * out_side_ + 0.5;
  return std::array<double, 2>{x, y};
}

std::vector<double> SampleBilinear(const Image& image, double h, double w) {
  const int h0 = static_cast<int>(std::floor(h));
  const int w0 = static_cast<int>(std::floor(w));
  const double fh = h - h0;
  const double fw = w - w0;
  const int r0 = std::clamp(h0, 1, image.rows) - 1;
  const int r1 = std::clamp(h0 + 1, 1, image.rows) - 1;
  const int c0 = WrapColumn(w0, image.cols) - 1;
  const int c1 = WrapColumn(w0 + 1LL, image.cols) - 1;
  std::vector<double> out(image.channels);
  for (int ch = 0; ch < image.channels; ++ch) {
    const double top =
        (1.0 - fw) * image.at(r0, c0, ch) + fw * image.at(r0, c1, ch);
    const double bottom =
        (1.0 - fw) * image.at(r1, c0, ch) + fw * image.at(r1, c1, ch);
    out[ch] = (1.0 - fh) * top + fh * bottom;
  }
  return out;
}

Image ErpToPerspective(const Image& image, const SphericalPoint& center,
                       double fov_degrees, int out_side) {
  const PerspectiveView view(center, fov_degrees, out_side);
  const ErpGrid grid = ErpGrid::Make(image.rows, image.cols);
  Image out(out_side, out_side, image.channels);
  for (int y = 1; y <= out_side; ++y) {
    for (int x = 1; x <= out_side; ++x) {
      const FractionalPixel src =
          SphericalToPixel(grid, view.PixelToDirection(x, y));
      const std::vector<double> value = SampleBilinear(image, src.h, src.w);
      for (int ch = 0; ch < image.channels; ++ch) {
        out.at(y - 1, x - 1, ch) = static_cast<std::uint8_t>(
            std::clamp(std::lround(value[ch]), 0L, 255L));
      }
    }
  }
  return out;
}

std::array<SphericalPoint, 6> CubemapCenters() {
  return {SphericalPoint{0.0, 0.0},   SphericalPoint{0.0, 90.0},
          SphericalPoint{0.0, -180.0}, SphericalPoint{0.0, -90.0},
          SphericalPoint{90.0, 0.0},  SphericalPoint{-90.0, 0.0}};
}

}  // namespace panokit
