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

#include "panokit/mask_ops.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <thread>

#include "panokit/errors.h"

namespace panokit {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

void CheckSameGrid(const EntityMask& a, const EntityMask& b) {
  if (!(a.grid == b.grid)) {
    throw InputError("masks '" + a.id + "' and '" + b.id +
                     "' live on different grids");
  }
}

struct Overlap {
  std::size_t intersection = 0;
  std::size_t union_ = 0;
};

Overlap CountOverlap(const EntityMask& a, const EntityMask& b) {
  Overlap o;
  for (std::size_t i = 0; i < a.bits.size(); ++i) {
    const bool x = a.bits[i] != 0;
    const bool y = b.bits[i] != 0;
    o.intersection += (x && y);
    o.union_ += (x || y);
  }
  return o;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t Find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // The smaller root wins so each group is keyed by its smallest index.
  void Union(std::size_t a, std::size_t b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

// Groups by the transitive closure of IoU > threshold over `masks` alone.
std::vector<std::vector<std::size_t>> SinglePassGroups(
    const std::vector<EntityMask>& masks, double threshold, int jobs);

// Labels 4-connected pixels whose bit equals `foreground`.
ComponentLabels LabelPixels(const EntityMask& mask, bool foreground,
                            bool seam_aware) {
  const int rows = mask.grid.height;
  const int cols = mask.grid.width;
  ComponentLabels out;
  out.labels.assign(static_cast<std::size_t>(rows) * cols, 0);
  std::vector<std::size_t> stack;
  auto index = [cols](int r, int c) {
    return static_cast<std::size_t>(r) * cols + c;
  };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const std::size_t start = index(r, c);
      if ((mask.bits[start] != 0) != foreground || out.labels[start] != 0) {
        continue;
      }
      const int label = ++out.count;
      out.labels[start] = label;
      stack.push_back(start);
      while (!stack.empty()) {
        const std::size_t p = stack.back();
        stack.pop_back();
        const int pr = static_cast<int>(p / cols);
        const int pc = static_cast<int>(p % cols);
        auto visit = [&](int nr, int nc) {
          if (nr < 0 || nr >= rows) return;
          if (nc < 0 || nc >= cols) {
            if (!seam_aware) return;
            nc = (nc + cols) % cols;
          }
          const std::size_t q = index(nr, nc);
          if ((mask.bits[q] != 0) == foreground && out.labels[q] == 0) {
            out.labels[q] = label;
            stack.push_back(q);
          }
        };
        visit(pr - 1, pc);
        visit(pr + 1, pc);
        visit(pr, pc - 1);
        visit(pr, pc + 1);
      }
    }
  }
  return out;
}

}  // namespace

EntityMask EntityMask::Empty(const ErpGrid& grid, std::string id) {
  EntityMask mask;
  mask.grid = ErpGrid::Make(grid.height, grid.width);
  mask.bits.assign(static_cast<std::size_t>(grid.height) * grid.width, 0);
  mask.id = std::move(id);
  return mask;
}

EntityMask EntityMask::FromImage(const Image& image, std::string id) {
  if (image.channels != 1) {
    throw InputError("mask images must be single-channel grayscale");
  }
  EntityMask mask = Empty(ErpGrid::Make(image.rows, image.cols), std::move(id));
  for (std::size_t i = 0; i < mask.bits.size(); ++i) {
    mask.bits[i] = image.data[i] != 0 ? 1 : 0;
  }
  return mask;
}

std::size_t EntityMask::area() const {
  return static_cast<std::size_t>(
      std::count_if(bits.begin(), bits.end(), [](auto b) { return b != 0; }));
}

Image EntityMask::ToImage() const {
  Image image(grid.height, grid.width, 1);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    image.data[i] = bits[i] != 0 ? 255 : 0;
  }
  return image;
}

EntityMask ProjectMaskToErp(const Image& slice_mask, const SliceView& view,
                            const ErpGrid& grid, std::string id) {
  if (slice_mask.channels != 1 || slice_mask.rows != view.side ||
      slice_mask.cols != view.side) {
    throw InputError("slice mask must be a single-channel " +
                     std::to_string(view.side) + "x" +
                     std::to_string(view.side) + " image, got " +
                     std::to_string(slice_mask.rows) + "x" +
                     std::to_string(slice_mask.cols));
  }
  EntityMask mask = EntityMask::Empty(grid, std::move(id));
  for (int y = 1; y <= view.side; ++y) {
    for (int x = 1; x <= view.side; ++x) {
      if (slice_mask.at(y - 1, x - 1) == 0) continue;
      const PixelIndex p = SliceToErpCoords(view, grid, x, y);
      mask.set(p.h, p.w);
    }
  }
  return mask;
}

double Iou(const EntityMask& a, const EntityMask& b) {
  CheckSameGrid(a, b);
  const Overlap o = CountOverlap(a, b);
  if (o.union_ == 0) {
    throw UndefinedIouError("IoU of two empty masks ('" + a.id + "', '" +
                            b.id + "') is undefined");
  }
  return static_cast<double>(o.intersection) / static_cast<double>(o.union_);
}

std::vector<double> IouMatrix(const std::vector<EntityMask>& masks,
                              int jobs) {
  const std::size_t n = masks.size();
  for (std::size_t i = 1; i < n; ++i) CheckSameGrid(masks[0], masks[i]);
  std::vector<double> matrix(n * n, 0.0);
  auto fill_rows = [&](std::size_t first, std::size_t step) {
    for (std::size_t i = first; i < n; i += step) {
      for (std::size_t j = i; j < n; ++j) {
        const Overlap o = CountOverlap(masks[i], masks[j]);
        const double v = o.union_ == 0 ? 0.0
                                       : static_cast<double>(o.intersection) /
                                             static_cast<double>(o.union_);
        matrix[i * n + j] = v;
        matrix[j * n + i] = v;
      }
    }
  };
  const std::size_t workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), 1,
                              std::max<std::size_t>(n, 1));
  if (workers == 1) {
    fill_rows(0, 1);
    return matrix;
  }
  std::vector<std::jthread> threads;
  threads.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    threads.emplace_back(fill_rows, t, workers);
  }
  threads.clear();
  return matrix;
}

namespace {

std::vector<std::vector<std::size_t>> SinglePassGroups(
    const std::vector<EntityMask>& masks, double threshold, int jobs) {
  const std::size_t n = masks.size();
  const std::vector<double> matrix = IouMatrix(masks, jobs);
  DisjointSets sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (matrix[i * n + j] > threshold) sets.Union(i, j);
    }
  }
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> group_of_root(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = sets.Find(i);
    if (group_of_root[root] == n) {
      group_of_root[root] = groups.size();
      groups.emplace_back();
    }
    groups[group_of_root[root]].push_back(i);
  }
  return groups;
}

}  // namespace

std::vector<std::vector<std::size_t>> MergeGroups(
    const std::vector<EntityMask>& masks, double threshold, int jobs) {
  std::vector<std::vector<std::size_t>> groups(masks.size());
  for (std::size_t i = 0; i < masks.size(); ++i) groups[i] = {i};
  std::vector<EntityMask> current = masks;
  // A union can overlap a third mask more than either member did, so repeat
  // until no two merged masks exceed the threshold.
  while (true) {
    const std::vector<std::vector<std::size_t>> pass =
        SinglePassGroups(current, threshold, jobs);
    if (pass.size() == current.size()) break;
    std::vector<std::vector<std::size_t>> next_groups;
    std::vector<EntityMask> next_masks;
    for (const auto& members : pass) {
      std::vector<std::size_t> merged;
      EntityMask united = current[members.front()];
      for (std::size_t k : members) {
        merged.insert(merged.end(), groups[k].begin(), groups[k].end());
        for (std::size_t i = 0; i < united.bits.size(); ++i) {
          united.bits[i] |= current[k].bits[i];
        }
      }
      std::sort(merged.begin(), merged.end());
      next_groups.push_back(std::move(merged));
      next_masks.push_back(std::move(united));
    }
    groups = std::move(next_groups);
    current = std::move(next_masks);
  }
  return groups;
}

std::vector<EntityMask> MergeMasks(const std::vector<EntityMask>& masks,
                                   double threshold, int jobs) {
  std::vector<EntityMask> merged;
  for (const auto& group : MergeGroups(masks, threshold, jobs)) {
    EntityMask result = masks[group.front()];
    for (std::size_t k = 1; k < group.size(); ++k) {
      const auto& other = masks[group[k]].bits;
      for (std::size_t i = 0; i < result.bits.size(); ++i) {
        result.bits[i] |= other[i];
      }
    }
    if (group.size() > 1) result.source_view.reset();
    merged.push_back(std::move(result));
  }
  return merged;
}

ComponentLabels ConnectedComponents(const EntityMask& mask, bool seam_aware) {
  return LabelPixels(mask, /*foreground=*/true, seam_aware);
}

std::string_view MaskQualityName(MaskQuality status) {
  switch (status) {
    case MaskQuality::kOk:
      return "ok";
    case MaskQuality::kPerforated:
      return "perforated";
    case MaskQuality::kSmallArea:
      return "small_area";
    case MaskQuality::kFragmented:
      return "fragmented";
  }
  return "unknown";
}

MaskQualityVerdict QualityFilter(const EntityMask& mask,
                                 double min_area_fraction) {
  MaskQualityVerdict verdict;
  const double pixels =
      static_cast<double>(mask.grid.height) * mask.grid.width;
  verdict.area_fraction = static_cast<double>(mask.area()) / pixels;
  verdict.component_count = ConnectedComponents(mask, true).count;

  const ComponentLabels background =
      LabelPixels(mask, /*foreground=*/false, /*seam_aware=*/true);
  std::vector<bool> exterior(background.count + 1, false);
  const int cols = mask.grid.width;
  const std::size_t last_row =
      static_cast<std::size_t>(mask.grid.height - 1) * cols;
  for (int c = 0; c < cols; ++c) {
    exterior[background.labels[c]] = true;
    exterior[background.labels[last_row + c]] = true;
  }
  for (int label = 1; label <= background.count; ++label) {
    if (!exterior[label]) ++verdict.hole_count;
  }

  if (verdict.area_fraction == 0.0 ||
      verdict.area_fraction < min_area_fraction) {
    verdict.status = MaskQuality::kSmallArea;
  } else if (verdict.component_count != 1) {
    verdict.status = MaskQuality::kFragmented;
  } else if (verdict.hole_count > 0) {
    verdict.status = MaskQuality::kPerforated;
  } else {
    verdict.status = MaskQuality::kOk;
  }
  return verdict;
}

SphericalPoint CircularCentroid(const EntityMask& mask) {
  double lat_sum = 0.0;
  double cos_sum = 0.0;
  double sin_sum = 0.0;
  std::size_t count = 0;
  for (int h = 1; h <= mask.grid.height; ++h) {
    const double lat = mask.grid.RowLatitude(h);
    for (int w = 1; w <= mask.grid.width; ++w) {
      if (!mask.test(h, w)) continue;
      const double lon = mask.grid.ColumnLongitude(w) * kDegToRad;
      lat_sum += lat;
      cos_sum += std::cos(lon);
      sin_sum += std::sin(lon);
      ++count;
    }
  }
  if (count == 0) {
    throw InputError("centroid of empty mask '" + mask.id + "'");
  }
  const double n = static_cast<double>(count);
  if (std::hypot(cos_sum / n, sin_sum / n) < 1e-12) {
    throw DegenerateCentroidError("mask '" + mask.id +
                                  "' has balanced longitudes; its centroid "
                                  "longitude is undefined");
  }
  return SphericalPoint::Make(lat_sum / n,
                              std::atan2(sin_sum, cos_sum) * kRadToDeg);
}

std::string_view DirectionName(Direction d) {
  switch (d) {
    case Direction::kFront:
      return "front";
    case Direction::kRight:
      return "right";
    case Direction::kBack:
      return "back";
    case Direction::kLeft:
      return "left";
    case Direction::kTop:
      return "top";
    case Direction::kBottom:
      return "bottom";
  }
  return "unknown";
}

Direction ParseDirection(std::string_view name) {
  for (Direction d : {Direction::kFront, Direction::kRight, Direction::kBack,
                      Direction::kLeft, Direction::kTop, Direction::kBottom}) {
    if (DirectionName(d) == name) return d;
  }
  throw InputError("unknown direction '" + std::string(name) + "'");
}

Direction DirectionOf(const SphericalPoint& p,
                      const DirectionBinning& binning) {
  if (p.latitude > binning.polar_latitude) return Direction::kTop;
  if (p.latitude < -binning.polar_latitude) return Direction::kBottom;
  const double lon = WrapLongitude(p.longitude);
  const double half = binning.front_half_width;
  if (std::abs(lon) <= half) return Direction::kFront;
  if (lon > half && lon <= 180.0 - half) return Direction::kRight;
  if (lon >= -(180.0 - half) && lon < -half) return Direction::kLeft;
  return Direction::kBack;
}

}  // namespace panokit
