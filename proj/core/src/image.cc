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

#include "panokit/image.h"

#include <png.h>

#include <cstring>

#include "panokit/errors.h"

namespace panokit {

Image::Image(int rows, int cols, int channels, std::uint8_t fill)
    : rows(rows),
      cols(cols),
      channels(channels),
      data(static_cast<std::size_t>(rows) * cols * channels, fill) {
  if (rows < 0 || cols < 0 || (channels != 1 && channels != 3)) {
    throw InputError("image must have non-negative size and 1 or 3 channels");
  }
}

Image ReadPng(const std::string& path) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    throw EnvironmentError("cannot read PNG '" + path + "': " + png.message);
  }
  const bool color = (png.format & PNG_FORMAT_FLAG_COLOR) != 0;
  png.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  Image image(static_cast<int>(png.height), static_cast<int>(png.width),
              color ? 3 : 1);
  // A null background composites alpha over black for the gray/RGB formats.
  if (!png_image_finish_read(&png, nullptr, image.data.data(), 0, nullptr)) {
    const std::string message = png.message;
    png_image_free(&png);
    throw EnvironmentError("cannot decode PNG '" + path + "': " + message);
  }
  return image;
}

void WritePng(const std::string& path, const Image& image) {
  if (image.channels != 1 && image.channels != 3) {
    throw InputError("PNG output needs 1 or 3 channels");
  }
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.cols);
  png.height = static_cast<png_uint_32>(image.rows);
  png.format = image.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&png, path.c_str(), 0, image.data.data(), 0,
                               nullptr)) {
    throw EnvironmentError("cannot write PNG '" + path + "': " + png.message);
  }
}

}  // namespace panokit
