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

#ifndef PANOKIT_MASK_OPS_H_
#define PANOKIT_MASK_OPS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "panokit/erp_geometry.h"
#include "panokit/image.h"

namespace panokit {

// Binary entity mask on an ERP grid. `bits` is row-major with one byte per
// pixel holding 0 or 1.
struct EntityMask {
  ErpGrid grid;
  std::vector<std::uint8_t> bits;
  std::string id;
  // Index into SliceViews() of the view the mask was segmented in; empty for
  // masks produced on the full ERP image.
  std::optional<int> source_view;

  static EntityMask Empty(const ErpGrid& grid, std::string id = {});
  // Any nonzero pixel of a single-channel image is foreground.
  static EntityMask FromImage(const Image& image, std::string id = {});

  bool test(int h, int w) const {
    return bits[static_cast<std::size_t>(h - 1) * grid.width + (w - 1)] != 0;
  }
  void set(int h, int w, bool on = true) {
    bits[static_cast<std::size_t>(h - 1) * grid.width + (w - 1)] = on ? 1 : 0;
  }

  std::size_t area() const;
  bool empty() const { return area() == 0; }
  // 0 = background, 255 = foreground.
  Image ToImage() const;
};

// Maps a square slice-space mask back onto the ERP grid through `view`.
EntityMask ProjectMaskToErp(const Image& slice_mask, const SliceView& view,
                            const ErpGrid& grid, std::string id = {});

// Throws UndefinedIouError when both masks are empty and InputError when the
// grids differ.
double Iou(const EntityMask& a, const EntityMask& b);

// Symmetric n x n IoU matrix in row-major order. Pairs of empty masks are
// defined as 0 so that the matrix is total. `jobs` > 1 splits rows across
// threads; the result does not depend on it.
std::vector<double> IouMatrix(const std::vector<EntityMask>& masks,
                              int jobs = 1);

inline constexpr double kDefaultMergeThreshold = 0.7;

// Groups masks by the transitive closure of IoU > threshold, repeated on the
// merged unions until no two of them exceed the threshold. Each group
// lists input indices in ascending order; groups are ordered by their
// smallest index.
std::vector<std::vector<std::size_t>> MergeGroups(
    const std::vector<EntityMask>& masks,
    double threshold = kDefaultMergeThreshold, int jobs = 1);

// Replaces every merge group with the pixelwise union of its members. The
// merged mask keeps the id of the group's first member.
std::vector<EntityMask> MergeMasks(const std::vector<EntityMask>& masks,
                                   double threshold = kDefaultMergeThreshold,
                                   int jobs = 1);

struct ComponentLabels {
  int count = 0;
  // Per-pixel label, 0 for background and 1..count for components, in
  // raster order of first appearance.
  std::vector<int> labels;
};

// 4-connected labeling. With `seam_aware`, columns 1 and W are adjacent.
ComponentLabels ConnectedComponents(const EntityMask& mask,
                                    bool seam_aware = true);

enum class MaskQuality { kOk, kPerforated, kSmallArea, kFragmented };

std::string_view MaskQualityName(MaskQuality status);

struct MaskQualityVerdict {
  MaskQuality status = MaskQuality::kOk;
  int component_count = 0;
  int hole_count = 0;
  double area_fraction = 0.0;
};

inline constexpr double kDefaultMinAreaFraction = 0.0005;

// Flags small, fragmented or perforated masks (checked in that order).
// Holes are background components that reach neither the top nor the
// bottom row; the seam is treated as connected.
MaskQualityVerdict QualityFilter(
    const EntityMask& mask, double min_area_fraction = kDefaultMinAreaFraction);

// Latitude is the mean over set pixels; longitude is the argument of the
// mean unit vector, so masks straddling the seam average correctly. Throws
// InputError for empty masks and DegenerateCentroidError when the mean
// vector vanishes.
SphericalPoint CircularCentroid(const EntityMask& mask);

enum class Direction { kFront, kRight, kBack, kLeft, kTop, kBottom };

inline constexpr Direction kLateralDirections[] = {
    Direction::kFront, Direction::kRight, Direction::kBack, Direction::kLeft};

std::string_view DirectionName(Direction d);
// Throws InputError for unknown names.
Direction ParseDirection(std::string_view name);

struct DirectionBinning {
  // Points above +polar_latitude or below -polar_latitude are top/bottom.
  double polar_latitude = 60.0;
  // front is |lon| <= front_half_width, back is |lon| > 180 - that.
  double front_half_width = 45.0;
};

Direction DirectionOf(const SphericalPoint& p,
                      const DirectionBinning& binning = {});

}  // namespace panokit

#endif  // PANOKIT_MASK_OPS_H_
