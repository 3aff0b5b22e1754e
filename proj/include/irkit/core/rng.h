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

#ifndef IRKIT_CORE_RNG_H_
#define IRKIT_CORE_RNG_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace irkit {

// Counter-based deterministic random stream.
//
// The i-th 64-bit output is a pure function of (key, i), where the key is
// derived by hashing the master seed together with the substream path. Two
// streams with the same (seed, path) produce identical sequences on every
// platform; distinct paths give unrelated keys.
//
// Uniform and normal variates are produced by our own transforms (not the
// <random> distributions, whose algorithms are implementation-defined) so that
// outputs are bit-reproducible across standard libraries.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  // Derives an independent child stream. The child does not share position
  // with the parent.
  RngStream substream(std::string_view label) const;
  RngStream substream(std::uint64_t index) const;

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  double uniform(double lo, double hi);
  // Uniform integer on [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);
  // Standard normal via Box-Muller.
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  bool bernoulli(double p) { return uniform() < p; }

  // Fisher-Yates shuffle driven by below().
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  // Draws k distinct indices from [0, n) in ascending order.
  std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                      std::size_t k);

  std::uint64_t seed() const { return seed_; }
  const std::vector<std::string>& path() const { return path_; }
  std::uint64_t counter() const { return counter_; }

 private:
  RngStream(std::uint64_t seed, std::vector<std::string> path,
            std::uint64_t key);

  std::uint64_t seed_;
  std::vector<std::string> path_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

// 64-bit finalizer used for key derivation and output mixing.
std::uint64_t mix64(std::uint64_t z);

}  // namespace irkit

#endif  // IRKIT_CORE_RNG_H_
