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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "panokit/erp_geometry.h"
#include "panokit/erp_rope.h"
#include "panokit/mask_ops.h"

namespace panokit {
namespace {

std::vector<EntityMask> RandomMasks(const ErpGrid& grid, int n) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> row(1, grid.height);
  std::uniform_int_distribution<int> col(1, grid.width);
  std::vector<EntityMask> masks;
  for (int i = 0; i < n; ++i) {
    EntityMask mask = EntityMask::Empty(grid);
    int h0 = row(rng);
    int h1 = row(rng);
    if (h1 < h0) std::swap(h0, h1);
    const int w0 = col(rng);
    const int span = 1 + col(rng) / 4;
    for (int h = h0; h <= h1; ++h) {
      for (int k = 0; k < span; ++k) mask.set(h, (w0 - 1 + k) % grid.width + 1);
    }
    masks.push_back(std::move(mask));
  }
  return masks;
}

void BM_IouMatrix(benchmark::State& state) {
  const auto masks = RandomMasks(ErpGrid::Make(128, 256),
                                 static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(IouMatrix(masks, static_cast<int>(state.range(1))));
  }
}
BENCHMARK(BM_IouMatrix)->Args({16, 1})->Args({64, 1})->Args({64, 4});

void BM_MergeMasks(benchmark::State& state) {
  const auto masks = RandomMasks(ErpGrid::Make(128, 256),
                                 static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(MergeMasks(masks, 0.7));
}
BENCHMARK(BM_MergeMasks)->Arg(16)->Arg(64);

void BM_ConnectedComponents(benchmark::State& state) {
  const ErpGrid grid = ErpGrid::Make(256, 512);
  const auto masks = RandomMasks(grid, 32);
  EntityMask all = EntityMask::Empty(grid);
  for (const auto& m : masks) {
    for (std::size_t i = 0; i < all.bits.size(); ++i) all.bits[i] |= m.bits[i];
  }
  for (auto _ : state) benchmark::DoNotOptimize(ConnectedComponents(all));
}
BENCHMARK(BM_ConnectedComponents);

void BM_ErpPositionGrid(benchmark::State& state) {
  const int H = static_cast<int>(state.range(0));
  const ErpGrid grid = ErpGrid::Make(H, 2 * H);
  for (auto _ : state) benchmark::DoNotOptimize(ErpPositionGrid(grid));
}
BENCHMARK(BM_ErpPositionGrid)->Arg(64)->Arg(1024);

void BM_RopeRotate(benchmark::State& state) {
  RotaryConfig config;
  config.head_dim = static_cast<int>(state.range(0));
  std::vector<double> v(config.head_dim, 0.25);
  for (auto _ : state) {
    benchmark::DoNotOptimize(RopeRotate(v, {3.0, 7.5}, config));
  }
}
BENCHMARK(BM_RopeRotate)->Arg(64)->Arg(128);

void BM_ErpToPerspective(benchmark::State& state) {
  const Image erp(512, 1024, 3, 128);
  const int side = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ErpToPerspective(erp, {10.0, 170.0}, 90.0, side));
  }
}
BENCHMARK(BM_ErpToPerspective)->Arg(128)->Arg(512);

}  // namespace
}  // namespace panokit

BENCHMARK_MAIN();
