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

#ifndef IRKIT_CLI_CLI_H_
#define IRKIT_CLI_CLI_H_

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace irkit::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitIo = 3,
  kExitBackend = 4,
};

// Runs one `irkit` invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

// Current UTC time as an ISO-8601 string.
std::string utc_timestamp();

// Parses "2..256" (inclusive range) or "2,4,8" (list); both forms may be
// mixed ("2..8,16"). ParameterError on malformed input.
std::vector<std::size_t> parse_size_list(const std::string& text);

}  // namespace irkit::cli

#endif  // IRKIT_CLI_CLI_H_
