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

#include "irkit/text/text.h"

#include <cctype>

#include "irkit/core/error.h"

namespace irkit::text {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_punct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u);
}

}  // namespace

std::string TokenizedDocument::text() const {
  std::string out = separators.front();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    out += tokens[i];
    out += separators[i + 1];
  }
  return out;
}

TokenizedDocument tokenize(std::string_view text, const TokenizerConfig& config) {
  std::string norm(text);
  if (config.lowercase) {
    for (auto& c : norm) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
  }
  TokenizedDocument doc;
  doc.config = config;
  std::string sep;
  std::size_t i = 0;
  while (i < norm.size()) {
    if (is_space(norm[i])) {
      sep += norm[i++];
      continue;
    }
    std::size_t j = i;
    if (config.split_punct && is_punct(norm[i])) {
      j = i + 1;
    } else {
      while (j < norm.size() && !is_space(norm[j]) &&
             !(config.split_punct && is_punct(norm[j]))) {
        ++j;
      }
    }
    doc.separators.push_back(std::move(sep));
    sep.clear();
    doc.tokens.push_back(norm.substr(i, j - i));
    i = j;
  }
  if (doc.tokens.empty()) throw ParameterError("empty document");
  doc.separators.push_back(std::move(sep));
  return doc;
}

std::string render(const TokenizedDocument& doc, const BinaryIR& keep) {
  const std::size_t n = doc.tokens.size();
  if (keep.size() != n) {
    throw ShapeError("keep vector has " + std::to_string(keep.size()) +
                     " bits for " + std::to_string(n) + " tokens");
  }
  std::string out;
  std::size_t prev = n;  // last kept token, n before the first
  for (std::size_t i = 0; i < n; ++i) {
    if (!keep[i]) continue;
    if (prev == n) {
      if (i == 0) out += doc.separators[0];
    } else if (prev + 1 == i) {
      out += doc.separators[i];
    } else {
      out += ' ';
    }
    out += doc.tokens[i];
    prev = i;
  }
  if (prev == n - 1) out += doc.separators[n];
  return out;
}

}  // namespace irkit::text
