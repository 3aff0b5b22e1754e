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

#ifndef IRKIT_IMAGE_SEGMENTATION_H_
#define IRKIT_IMAGE_SEGMENTATION_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "irkit/image/image.h"
#include "json.hpp"

namespace irkit::image {

// Per-pixel superpixel labels 0..segment_count()-1, row-major.
class Segmentation {
 public:
  Segmentation() = default;
  // Labels are compacted to 0..S-1 in order of first appearance.
  Segmentation(int width, int height, std::vector<std::uint32_t> labels);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t segment_count() const { return count_; }
  std::uint32_t label(int x, int y) const {
    return labels_[static_cast<std::size_t>(y) * width_ + x];
  }
  const std::vector<std::uint32_t>& labels() const { return labels_; }
  std::vector<std::size_t> sizes() const;

  // Every segment non-empty and 4-connected.
  bool is_valid() const;

  nlohmann::json sizes_json() const;
  void write_label_map(const std::filesystem::path& path) const;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint32_t> labels_;
  std::size_t count_ = 0;
};

struct SlicOptions {
  int n_segments = 10;
  double compactness = 10.0;
  int iterations = 10;
};

// SLIC superpixels: k-means over (r, g, b, (m/S) x, (m/S) y) with m the
// compactness and S = sqrt(HW / n) the grid interval. Centres start on a
// regular grid of exactly n seeds, each centre only claims pixels within S
// of it (pixels no window reaches fall back to the nearest centre), and
// disconnected fragments are merged into their largest neighbouring segment.
// The result has at most n segments.
//
// ParameterError when n_segments < 1 or exceeds the pixel count.
Segmentation slic_segment(const Image& img, const SlicOptions& options);

}  // namespace irkit::image

#endif  // IRKIT_IMAGE_SEGMENTATION_H_
