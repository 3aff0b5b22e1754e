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

#include "irkit/image/occlusion.h"

#include <vector>

#include "irkit/core/error.h"

namespace irkit::image {
namespace {

struct Named {
  OcclusionStrategy strategy;
  const char* name;
};

constexpr Named kNames[] = {
    {OcclusionStrategy::kBlack, "black"}, {OcclusionStrategy::kWhite, "white"},
    {OcclusionStrategy::kRed, "red"},     {OcclusionStrategy::kGreen, "green"},
    {OcclusionStrategy::kBlue, "blue"},   {OcclusionStrategy::kPink, "pink"},
    {OcclusionStrategy::kMean, "mean"},   {OcclusionStrategy::kRandom, "random"},
};

std::uint8_t round_half_up(std::uint64_t sum, std::uint64_t count) {
  return static_cast<std::uint8_t>((2 * sum + count) / (2 * count));
}

void check_shape(const Image& img, const Segmentation& seg) {
  if (seg.width() != img.width() || seg.height() != img.height()) {
    throw ShapeError("segmentation size differs from image size");
  }
}

}  // namespace

std::string strategy_name(OcclusionStrategy s) {
  for (const auto& n : kNames) {
    if (n.strategy == s) return n.name;
  }
  throw ParameterError("unknown occlusion strategy");
}

OcclusionStrategy parse_strategy(std::string_view name) {
  for (const auto& n : kNames) {
    if (name == n.name) return n.strategy;
  }
  throw ParameterError("unknown occlusion strategy '" + std::string(name) + "'");
}

bool fixed_colour(OcclusionStrategy s, Rgb* out) {
  switch (s) {
    case OcclusionStrategy::kBlack: *out = {0, 0, 0}; return true;
    case OcclusionStrategy::kWhite: *out = {255, 255, 255}; return true;
    case OcclusionStrategy::kRed: *out = {255, 0, 0}; return true;
    case OcclusionStrategy::kGreen: *out = {0, 255, 0}; return true;
    case OcclusionStrategy::kBlue: *out = {0, 0, 255}; return true;
    case OcclusionStrategy::kPink: *out = {255, 192, 203}; return true;
    case OcclusionStrategy::kMean:
    case OcclusionStrategy::kRandom: return false;
  }
  return false;
}

Rgb segment_mean(const Image& img, const Segmentation& seg,
                 std::uint32_t segment) {
  check_shape(img, seg);
  if (segment >= seg.segment_count()) throw ParameterError("segment id out of range");
  std::uint64_t r = 0, g = 0, b = 0, n = 0;
  const auto& labels = seg.labels();
  for (std::size_t p = 0; p < labels.size(); ++p) {
    if (labels[p] != segment) continue;
    r += img[p].r;
    g += img[p].g;
    b += img[p].b;
    ++n;
  }
  if (n == 0) throw ParameterError("empty segment");
  return {round_half_up(r, n), round_half_up(g, n), round_half_up(b, n)};
}

Rgb occlusion_color(const Image& img, const Segmentation& seg,
                    std::uint32_t segment, OcclusionStrategy strategy,
                    RngStream& rng) {
  if (segment >= seg.segment_count()) throw ParameterError("segment id out of range");
  Rgb c;
  if (fixed_colour(strategy, &c)) return c;
  if (strategy == OcclusionStrategy::kMean) return segment_mean(img, seg, segment);
  c.r = static_cast<std::uint8_t>(rng.below(256));
  c.g = static_cast<std::uint8_t>(rng.below(256));
  c.b = static_cast<std::uint8_t>(rng.below(256));
  return c;
}

Image occlude(const Image& img, const Segmentation& seg, const BinaryIR& keep,
              OcclusionStrategy strategy, RngStream& rng) {
  check_shape(img, seg);
  const std::size_t s = seg.segment_count();
  if (keep.size() != s) {
    throw ShapeError("keep vector has " + std::to_string(keep.size()) +
                     " bits for " + std::to_string(s) + " segments");
  }
  if (keep.count_ones() == s) return img;

  std::vector<Rgb> fill(s);
  if (strategy == OcclusionStrategy::kMean) {
    std::vector<std::uint64_t> sum(3 * s, 0), count(s, 0);
    const auto& labels = seg.labels();
    for (std::size_t p = 0; p < labels.size(); ++p) {
      const auto l = labels[p];
      sum[3 * l] += img[p].r;
      sum[3 * l + 1] += img[p].g;
      sum[3 * l + 2] += img[p].b;
      ++count[l];
    }
    for (std::size_t l = 0; l < s; ++l) {
      if (keep[l] || count[l] == 0) continue;
      fill[l] = {round_half_up(sum[3 * l], count[l]),
                 round_half_up(sum[3 * l + 1], count[l]),
                 round_half_up(sum[3 * l + 2], count[l])};
    }
  } else {
    for (std::uint32_t l = 0; l < s; ++l) {
      if (!keep[l]) fill[l] = occlusion_color(img, seg, l, strategy, rng);
    }
  }

  Image out = img;
  const auto& labels = seg.labels();
  for (std::size_t p = 0; p < labels.size(); ++p) {
    if (!keep[labels[p]]) out[p] = fill[labels[p]];
  }
  return out;
}

}  // namespace irkit::image
