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

#include "irkit/image/segmentation.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "irkit/core/error.h"

namespace irkit::image {
namespace {

constexpr std::uint32_t kUnassigned = std::numeric_limits<std::uint32_t>::max();

struct Centre {
  double r, g, b, x, y;
};

// 4-connected components of equal label. Returns per-pixel component ids.
std::vector<std::uint32_t> components(int w, int h,
                                      const std::vector<std::uint32_t>& labels,
                                      std::size_t* count) {
  std::vector<std::uint32_t> comp(labels.size(), kUnassigned);
  std::vector<std::size_t> stack;
  std::uint32_t next = 0;
  for (std::size_t start = 0; start < labels.size(); ++start) {
    if (comp[start] != kUnassigned) continue;
    comp[start] = next;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      const int x = static_cast<int>(p % w), y = static_cast<int>(p / w);
      const std::size_t nbrs[4] = {x > 0 ? p - 1 : p, x + 1 < w ? p + 1 : p,
                                   y > 0 ? p - w : p, y + 1 < h ? p + w : p};
      for (const std::size_t q : nbrs) {
        if (q != p && comp[q] == kUnassigned && labels[q] == labels[p]) {
          comp[q] = next;
          stack.push_back(q);
        }
      }
    }
    ++next;
  }
  *count = next;
  return comp;
}

// Relabels every fragment that is not the largest component of its label to
// the adjacent label with the largest total area, until each label is a
// single connected component.
void enforce_connectivity(int w, int h, std::vector<std::uint32_t>& labels) {
  while (true) {
    std::size_t n_comp = 0;
    const auto comp = components(w, h, labels, &n_comp);
    std::vector<std::size_t> comp_size(n_comp, 0);
    std::vector<std::uint32_t> comp_label(n_comp, 0);
    std::vector<std::size_t> comp_first(n_comp, labels.size());
    for (std::size_t p = 0; p < labels.size(); ++p) {
      ++comp_size[comp[p]];
      comp_label[comp[p]] = labels[p];
      comp_first[comp[p]] = std::min(comp_first[comp[p]], p);
    }
    // Main component per label: largest, earliest on ties.
    std::unordered_map<std::uint32_t, std::uint32_t> main;
    for (std::uint32_t c = 0; c < n_comp; ++c) {
      auto [it, inserted] = main.emplace(comp_label[c], c);
      if (!inserted && comp_size[c] > comp_size[it->second]) it->second = c;
    }
    if (main.size() == n_comp) return;

    std::unordered_map<std::uint32_t, std::size_t> label_area;
    for (const auto l : labels) ++label_area[l];

    std::vector<std::vector<std::size_t>> pixels_of(n_comp);
    for (std::size_t p = 0; p < labels.size(); ++p) pixels_of[comp[p]].push_back(p);

    for (std::uint32_t c = 0; c < n_comp; ++c) {
      if (main.at(comp_label[c]) == c) continue;
      const std::uint32_t own = labels[pixels_of[c].front()];
      std::uint32_t target = own;
      std::size_t target_area = 0;
      for (const std::size_t p : pixels_of[c]) {
        const int x = static_cast<int>(p % w), y = static_cast<int>(p / w);
        const std::size_t nbrs[4] = {x > 0 ? p - 1 : p, x + 1 < w ? p + 1 : p,
                                     y > 0 ? p - w : p, y + 1 < h ? p + w : p};
        for (const std::size_t q : nbrs) {
          const std::uint32_t l = labels[q];
          if (q == p || l == own) continue;
          const std::size_t area = label_area[l];
          if (target == own || area > target_area ||
              (area == target_area && l < target)) {
            target = l;
            target_area = area;
          }
        }
      }
      if (target == own) continue;  // only possible for a whole-image label
      for (const std::size_t p : pixels_of[c]) labels[p] = target;
      label_area[own] -= pixels_of[c].size();
      label_area[target] += pixels_of[c].size();
    }
  }
}

}  // namespace

Segmentation::Segmentation(int width, int height,
                           std::vector<std::uint32_t> labels)
    : width_(width), height_(height), labels_(std::move(labels)) {
  if (labels_.size() != static_cast<std::size_t>(width) * height) {
    throw ShapeError("label map size differs from width*height");
  }
  std::unordered_map<std::uint32_t, std::uint32_t> remap;
  for (auto& l : labels_) {
    const auto [it, inserted] =
        remap.emplace(l, static_cast<std::uint32_t>(remap.size()));
    l = it->second;
  }
  count_ = remap.size();
}

std::vector<std::size_t> Segmentation::sizes() const {
  std::vector<std::size_t> out(count_, 0);
  for (const auto l : labels_) ++out[l];
  return out;
}

bool Segmentation::is_valid() const {
  if (labels_.empty()) return false;
  for (const auto l : labels_) {
    if (l >= count_) return false;
  }
  const auto s = sizes();
  if (std::any_of(s.begin(), s.end(), [](std::size_t n) { return n == 0; })) {
    return false;
  }
  std::size_t n_comp = 0;
  components(width_, height_, labels_, &n_comp);
  return n_comp == count_;
}

nlohmann::json Segmentation::sizes_json() const {
  nlohmann::json out = nlohmann::json::object();
  const auto s = sizes();
  for (std::size_t i = 0; i < s.size(); ++i) out[std::to_string(i)] = s[i];
  return out;
}

void Segmentation::write_label_map(const std::filesystem::path& path) const {
  if (count_ > 65536) throw IoError("too many segments for a 16-bit label map");
  std::vector<std::uint16_t> l16(labels_.begin(), labels_.end());
  write_label_png(l16, width_, height_, path);
}

Segmentation slic_segment(const Image& img, const SlicOptions& options) {
  const int w = img.width(), h = img.height();
  const auto n_pixels = img.pixel_count();
  if (options.n_segments < 1 ||
      static_cast<std::size_t>(options.n_segments) > n_pixels) {
    throw ParameterError("n_segments must be in [1, pixel count]");
  }
  if (!(options.compactness > 0.0)) {
    throw ParameterError("compactness must be positive");
  }
  if (options.iterations < 0) throw ParameterError("iterations must be >= 0");

  const int n = options.n_segments;
  const double grid = std::sqrt(static_cast<double>(n_pixels) / n);
  const double spatial = options.compactness / grid;

  // Seeds: `rows` rows, the first (n % rows) of them holding one extra seed.
  int rows = static_cast<int>(std::lround(std::sqrt(double(n) * h / w)));
  rows = std::clamp(rows, 1, std::min(n, h));
  std::vector<Centre> centres;
  for (int r = 0; r < rows; ++r) {
    int in_row = n / rows + (r < n % rows ? 1 : 0);
    in_row = std::min(in_row, w);
    const int py = std::min(h - 1, static_cast<int>((r + 0.5) * h / rows));
    for (int c = 0; c < in_row; ++c) {
      const int px = std::min(w - 1, static_cast<int>((c + 0.5) * w / in_row));
      const Rgb& p = img.at(px, py);
      centres.push_back({double(p.r), double(p.g), double(p.b),
                         double(px), double(py)});
    }
  }

  std::vector<std::uint32_t> labels(n_pixels, 0);
  std::vector<double> dist(n_pixels);
  const int window = static_cast<int>(std::ceil(grid));
  auto distance = [&](const Centre& c, int x, int y) {
    const Rgb& p = img.at(x, y);
    const double dr = p.r - c.r, dg = p.g - c.g, db = p.b - c.b;
    const double dx = (x - c.x) * spatial, dy = (y - c.y) * spatial;
    return dr * dr + dg * dg + db * db + dx * dx + dy * dy;
  };
  auto assign = [&] {
    std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
    std::fill(labels.begin(), labels.end(), kUnassigned);
    for (std::uint32_t k = 0; k < centres.size(); ++k) {
      const Centre& c = centres[k];
      const int cx = static_cast<int>(std::lround(c.x));
      const int cy = static_cast<int>(std::lround(c.y));
      for (int y = std::max(0, cy - window); y <= std::min(h - 1, cy + window); ++y) {
        for (int x = std::max(0, cx - window); x <= std::min(w - 1, cx + window); ++x) {
          const std::size_t p = static_cast<std::size_t>(y) * w + x;
          const double d = distance(c, x, y);
          if (d < dist[p]) {
            dist[p] = d;
            labels[p] = k;
          }
        }
      }
    }
    for (std::size_t p = 0; p < n_pixels; ++p) {
      if (labels[p] != kUnassigned) continue;
      const int x = static_cast<int>(p % w), y = static_cast<int>(p / w);
      for (std::uint32_t k = 0; k < centres.size(); ++k) {
        const double d = distance(centres[k], x, y);
        if (d < dist[p]) {
          dist[p] = d;
          labels[p] = k;
        }
      }
    }
  };

  assign();
  for (int it = 0; it < options.iterations; ++it) {
    std::vector<Centre> sum(centres.size(), Centre{0, 0, 0, 0, 0});
    std::vector<std::size_t> count(centres.size(), 0);
    for (std::size_t p = 0; p < n_pixels; ++p) {
      const Rgb& px = img[p];
      Centre& s = sum[labels[p]];
      s.r += px.r;
      s.g += px.g;
      s.b += px.b;
      s.x += static_cast<double>(p % w);
      s.y += static_cast<double>(p / w);
      ++count[labels[p]];
    }
    for (std::size_t k = 0; k < centres.size(); ++k) {
      if (count[k] == 0) continue;
      const double m = static_cast<double>(count[k]);
      centres[k] = {sum[k].r / m, sum[k].g / m, sum[k].b / m, sum[k].x / m,
                    sum[k].y / m};
    }
    assign();
  }

  enforce_connectivity(w, h, labels);
  return Segmentation(w, h, std::move(labels));
}

}  // namespace irkit::image
