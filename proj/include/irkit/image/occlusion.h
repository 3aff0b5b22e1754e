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

#ifndef IRKIT_IMAGE_OCCLUSION_H_
#define IRKIT_IMAGE_OCCLUSION_H_

#include <array>
#include <string>
#include <string_view>

#include "irkit/core/binary_ir.h"
#include "irkit/core/rng.h"
#include "irkit/image/image.h"
#include "irkit/image/segmentation.h"

namespace irkit::image {

enum class OcclusionStrategy {
  kBlack,
  kWhite,
  kRed,
  kGreen,
  kBlue,
  kPink,
  kMean,
  kRandom,
};

inline constexpr std::array<OcclusionStrategy, 8> kAllStrategies = {
    OcclusionStrategy::kBlack, OcclusionStrategy::kWhite,
    OcclusionStrategy::kRed,   OcclusionStrategy::kGreen,
    OcclusionStrategy::kBlue,  OcclusionStrategy::kPink,
    OcclusionStrategy::kMean,  OcclusionStrategy::kRandom};

std::string strategy_name(OcclusionStrategy s);
// ParameterError for unknown names.
OcclusionStrategy parse_strategy(std::string_view name);

// Constant fill colour of a fixed strategy; false for mean and random.
bool fixed_colour(OcclusionStrategy s, Rgb* out);

// Channel means of one segment, rounded half-up.
Rgb segment_mean(const Image& img, const Segmentation& seg,
                 std::uint32_t segment);

// The colour that replaces `segment`. The random strategy consumes three
// draws from `rng`; the others leave it untouched.
Rgb occlusion_color(const Image& img, const Segmentation& seg,
                    std::uint32_t segment, OcclusionStrategy strategy,
                    RngStream& rng);

// Fills every segment whose bit is 0. ShapeError when keep.size() differs
// from the segment count or the segmentation does not match the image.
// Random colours are drawn in segment order, one triple per occluded segment.
Image occlude(const Image& img, const Segmentation& seg, const BinaryIR& keep,
              OcclusionStrategy strategy, RngStream& rng);

}  // namespace irkit::image

#endif  // IRKIT_IMAGE_OCCLUSION_H_
