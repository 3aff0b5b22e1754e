/*
 * Copyright 2026 The irkit Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef IRKIT_IMAGE_IMAGE_H_
#define IRKIT_IMAGE_IMAGE_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace irkit::image {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// 8-bit RGB raster, row-major.
class Image {
 public:
  Image() = default;
  Image(int width, int height, Rgb fill = {});

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return pixels_.size(); }
  bool empty() const { return pixels_.empty(); }

  Rgb& at(int x, int y) { return pixels_[index(x, y)]; }
  const Rgb& at(int x, int y) const { return pixels_[index(x, y)]; }
  Rgb& operator[](std::size_t i) { return pixels_[i]; }
  const Rgb& operator[](std::size_t i) const { return pixels_[i]; }
  const std::vector<Rgb>& pixels() const { return pixels_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<Rgb> pixels_;
};

// Nearest-neighbour when the source dimensions are exact integer multiples of
// the target, bilinear otherwise.
Image resize(const Image& img, int width, int height);

// PNG I/O (8-bit RGB; palette, grey and alpha inputs are converted).
Image read_png(const std::filesystem::path& path);
void write_png(const Image& img, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_png(const Image& img);
Image decode_png(const std::vector<std::uint8_t>& bytes);

// 16-bit greyscale PNG used for segmentation label maps.
void write_label_png(const std::vector<std::uint16_t>& labels, int width,
                     int height, const std::filesystem::path& path);
std::vector<std::uint16_t> read_label_png(const std::filesystem::path& path,
                                          int* width, int* height);

}  // namespace irkit::image

#endif  // IRKIT_IMAGE_IMAGE_H_
