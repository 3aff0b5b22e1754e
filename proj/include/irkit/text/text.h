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

#ifndef IRKIT_TEXT_TEXT_H_
#define IRKIT_TEXT_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

#include "irkit/core/binary_ir.h"

namespace irkit::text {

struct TokenizerConfig {
  bool lowercase = false;
  // Every ASCII punctuation character becomes a token of its own.
  bool split_punct = true;
};

// Tokens plus the whitespace around them. separators has tokens.size() + 1
// entries: leading text, the gap after each token but the last, trailing text.
struct TokenizedDocument {
  std::vector<std::string> tokens;
  std::vector<std::string> separators;
  TokenizerConfig config;

  std::size_t size() const { return tokens.size(); }
  // The (normalized) source text.
  std::string text() const;
};

// Whitespace-delimited tokens; ASCII lowercasing only. Bytes outside ASCII
// are word characters. ParameterError for empty or whitespace-only text.
TokenizedDocument tokenize(std::string_view text, const TokenizerConfig& config = {});

// Removes every token whose bit is 0. Kept neighbours keep their original
// separator; a gap that lost tokens becomes a single space, and gaps at the
// start or end that lost tokens vanish. ShapeError on length mismatch.
std::string render(const TokenizedDocument& doc, const BinaryIR& keep);

}  // namespace irkit::text

#endif  // IRKIT_TEXT_TEXT_H_
