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

#ifndef IRKIT_CORE_BINARY_IR_H_
#define IRKIT_CORE_BINARY_IR_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace irkit {

// Presence (1) / absence (0) of each interpretable concept: a tabular
// feature's anchor bin, an image segment or a text token.
struct BinaryIR {
  std::vector<std::uint8_t> bits;

  std::size_t size() const { return bits.size(); }
  std::uint8_t operator[](std::size_t j) const { return bits[j]; }
  std::size_t count_ones() const {
    std::size_t n = 0;
    for (const auto b : bits) n += b != 0;
    return n;
  }
  static BinaryIR Ones(std::size_t n) { return {std::vector<std::uint8_t>(n, 1)}; }
  static BinaryIR Zeros(std::size_t n) { return {std::vector<std::uint8_t>(n, 0)}; }
  friend auto operator<=>(const BinaryIR&, const BinaryIR&) = default;
};

}  // namespace irkit

#endif  // IRKIT_CORE_BINARY_IR_H_
