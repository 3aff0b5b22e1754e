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

#ifndef IRKIT_TABULAR_SAMPLING_H_
#define IRKIT_TABULAR_SAMPLING_H_

#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include "irkit/core/rng.h"
#include "irkit/tabular/cell_stats.h"
#include "irkit/tabular/discretization.h"

namespace irkit::tabular {

// Maps a binary vector back to the original domain. A 1 keeps the anchor's
// bin; a 0 picks one of the other bins uniformly. Numerical values come from
// the bin's Gaussian truncated to the bin (rejection, 100 attempts, then
// uniform within the bin); bins with fewer than two training members use the
// feature's global Gaussian. The result always re-binarizes to `b`.
//
// InfeasibleError when a 0 is requested for a single-bin feature.
Instance inverse_transform(const BinaryIR& b, const Anchor& a,
                           const Discretization& d, const CellStats& stats,
                           RngStream& rng);

struct SamplerConfig {
  // Per-feature std of the sampling Gaussian, in units of training std.
  double scale = 1.0;
  // Probability that a categorical feature is redrawn from its empirical
  // frequencies instead of keeping the anchor's category.
  double flip = 1.0;
};

// One sample seen through all three representations.
struct BoundSample {
  Instance original;
  DiscreteCoords coords;
  BinaryIR binary;
};

// Samples in the original domain around the anchor and records the matching
// discrete and binary views of each draw.
std::vector<BoundSample> sample_and_bind(const Anchor& a,
                                         const Discretization& d,
                                         const std::vector<FeatureSummary>& features,
                                         const SamplerConfig& config,
                                         std::size_t n, RngStream& rng);

struct EncodingCount {
  std::size_t used = 0;
  // Product of bin counts (no anchor) or 2^arity (with anchor). Stored as a
  // double since it overflows 64 bits for wide schemas.
  double theoretical = 0.0;
};

EncodingCount count_encodings(const TabularDataset& ds, const Discretization& d,
                              const Anchor* anchor = nullptr);

// CSV with column groups orig_*, disc_*, bin_*.
void write_bound_samples_csv(std::ostream& out, const Discretization& d,
                             const std::vector<BoundSample>& samples);

}  // namespace irkit::tabular

#endif  // IRKIT_TABULAR_SAMPLING_H_
