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

#include "irkit/core/datasets.h"

#include <cstdlib>
#include <fstream>

#include "irkit/core/error.h"

#ifndef IRKIT_SOURCE_DATA_DIR
#define IRKIT_SOURCE_DATA_DIR "data"
#endif

namespace irkit {

const std::vector<DatasetInfo>& builtin_datasets() {
  static const std::vector<DatasetInfo> kDatasets = {
      {"wine", "wine.csv", "label", TargetParse::kLabels},
      {"breast_cancer", "breast_cancer.csv", "label", TargetParse::kLabels},
      {"housing", "housing.csv", "medv", TargetParse::kNumeric},
      {"diabetes", "diabetes.csv", "target", TargetParse::kNumeric},
  };
  return kDatasets;
}

std::optional<DatasetInfo> find_dataset(std::string_view id) {
  if (id == "cancer") id = "breast_cancer";
  if (id == "boston") id = "housing";
  for (const auto& d : builtin_datasets()) {
    if (d.id == id) return d;
  }
  return std::nullopt;
}

std::filesystem::path resolve_data_dir(
    const std::optional<std::filesystem::path>& override_dir) {
  if (override_dir) return *override_dir;
  if (const char* env = std::getenv("IRKIT_CACHE"); env && *env) {
    return std::filesystem::path(env);
  }
  return std::filesystem::path(IRKIT_SOURCE_DATA_DIR);
}

std::vector<std::string> read_csv_header(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("empty file '" + path.string() + "'");
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    std::string cell = line.substr(start, pos == std::string::npos
                                              ? std::string::npos
                                              : pos - start);
    if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"') {
      cell = cell.substr(1, cell.size() - 2);
    }
    out.push_back(std::move(cell));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

TabularDataset load_builtin_dataset(std::string_view id,
                                    const std::filesystem::path& data_dir) {
  const auto info = find_dataset(id);
  if (!info) throw ParameterError("unknown dataset '" + std::string(id) + "'");
  const auto path = data_dir / info->file;
  if (!std::filesystem::exists(path)) {
    throw IoError("dataset '" + info->id + "' not found at '" + path.string() +
                  "'; run scripts/fetch_datasets.py or set IRKIT_CACHE");
  }
  std::vector<std::string> names;
  for (auto& h : read_csv_header(path)) {
    if (h != info->target_column) names.push_back(std::move(h));
  }
  return load_tabular_csv(path, FeatureSchema::Numerical(names),
                          info->target_column, info->target_parse);
}

}  // namespace irkit
