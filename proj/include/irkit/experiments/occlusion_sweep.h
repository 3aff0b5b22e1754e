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

#ifndef IRKIT_EXPERIMENTS_OCCLUSION_SWEEP_H_
#define IRKIT_EXPERIMENTS_OCCLUSION_SWEEP_H_

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "irkit/core/blackbox.h"
#include "irkit/image/image.h"
#include "irkit/image/occlusion.h"
#include "irkit/image/segmentation.h"

namespace irkit::experiments {

struct SweepConfig {
  std::vector<int> segment_counts{5, 10, 15, 20, 30, 40};
  std::vector<image::OcclusionStrategy> strategies{image::kAllStrategies.begin(),
                                                   image::kAllStrategies.end()};
  std::size_t repeats = 20;
  std::uint64_t seed = 0;
  double compactness = 10.0;
  int iterations = 10;
  // Workers over images; 0 means all cores.
  std::size_t jobs = 1;
};

struct SweepImage {
  std::string id;
  image::Image image;
};

// Squared errors of the top-class probability, pooled over images and
// repeats. mse_mean and mse_std are NaN when n_obs is 0 (k above the segment
// count SLIC produced for every image). `errors` counts perturbations lost to
// black-box failures.
struct SweepRow {
  image::OcclusionStrategy strategy;
  int n_segments = 0;
  int k = 0;
  double mse_mean = 0.0;
  double mse_std = 0.0;
  std::size_t n_obs = 0;
  std::size_t errors = 0;
};

struct SweepResult {
  // Ordered by strategy (config order), then n_segments, then k = 0..n.
  std::vector<SweepRow> rows;
  std::size_t images_used = 0;
  std::vector<std::string> warnings;
};

// For every image and segment count: segment once, record the top class of
// the unoccluded image, then for k = 0..S draw `repeats` random k-subsets of
// segments (one draw for k = 0 and k = S), occlude them under every strategy
// and score the squared change of the top-class probability. The same masks
// are shared by all strategies; random colours are redrawn per perturbation.
//
// An image whose unoccluded prediction fails is skipped with a warning;
// BackendError when no image could be evaluated.
SweepResult occlusion_sweep(const std::vector<SweepImage>& images,
                            BlackBox& bb, const SweepConfig& config);

// Loads every *.png in a directory in name order.
std::vector<SweepImage> load_image_dir(const std::filesystem::path& dir,
                                       int resize_to = 0);

void write_sweep_csv(std::ostream& out, const SweepResult& result);
// One table per segment count: k followed by one MSE column per strategy.
void write_sweep_series_csv(std::ostream& out, const SweepResult& result,
                            int n_segments);

}  // namespace irkit::experiments

#endif  // IRKIT_EXPERIMENTS_OCCLUSION_SWEEP_H_
