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

#ifndef IRKIT_CORE_ERROR_H_
#define IRKIT_CORE_ERROR_H_

#include <stdexcept>
#include <string>

namespace irkit {

// Base class of every error raised by the toolkit. The CLI maps the
// subclasses onto exit codes (see cli/run.h).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user-supplied parameter (q < 2, max_leaves < 2, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Header/column layout does not match the declared schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// A cell could not be parsed. Carries 1-based row and the column name.
class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t row, std::string column)
      : Error(std::move(message)), row_(row), column_(std::move(column)) {}
  std::size_t row() const { return row_; }
  const std::string& column() const { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

// Value outside a declared domain (unknown category, bad label, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Vector/matrix arity mismatch.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Operation is undefined for the given input (empty cell, no "other" bin).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Inconsistent configuration (e.g. too few samples for OLS).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Filesystem or encoding failure.
class IoError : public Error {
 public:
  using Error::Error;
};

// External black box died, timed out or could not be started.
class BackendError : public Error {
 public:
  BackendError(std::string message, std::string stderr_excerpt = {})
      : Error(std::move(message)), stderr_excerpt_(std::move(stderr_excerpt)) {}
  const std::string& stderr_excerpt() const { return stderr_excerpt_; }

 private:
  std::string stderr_excerpt_;
};

// External black box answered with a malformed message.
class ProtocolError : public BackendError {
 public:
  using BackendError::BackendError;
};

}  // namespace irkit

#endif  // IRKIT_CORE_ERROR_H_
