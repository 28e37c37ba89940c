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

#ifndef PANOKIT_IMAGE_H_
#define PANOKIT_IMAGE_H_

#include <cstdint>
#include <string>
#include <vector>

namespace panokit {

// Interleaved 8-bit raster, 1 (grayscale) or 3 (RGB) channels. Storage is
// row-major and 0-based; the geometry functions expose 1-based indices.
struct Image {
  int rows = 0;
  int cols = 0;
  int channels = 1;
  std::vector<std::uint8_t> data;

  Image() = default;
  Image(int rows, int cols, int channels, std::uint8_t fill = 0);

  std::uint8_t& at(int r, int c, int ch = 0) {
    return data[(static_cast<std::size_t>(r) * cols + c) * channels + ch];
  }
  std::uint8_t at(int r, int c, int ch = 0) const {
    return data[(static_cast<std::size_t>(r) * cols + c) * channels + ch];
  }

  friend bool operator==(const Image&, const Image&) = default;
};

// Reads an 8-bit PNG. Color inputs decode to RGB, everything else to
// grayscale; alpha is composited away. Throws EnvironmentError on I/O
// failure.
Image ReadPng(const std::string& path);

// Writes `image` as an 8-bit grayscale or RGB PNG.
void WritePng(const std::string& path, const Image& image);

}  // namespace panokit

#endif  // PANOKIT_IMAGE_H_
