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

#ifndef IRKIT_CORE_DATASETS_H_
#define IRKIT_CORE_DATASETS_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "irkit/core/dataset.h"

namespace irkit {

// The four benchmark datasets (wine, breast_cancer, housing, diabetes), read
// from CSV files produced by scripts/fetch_datasets.py.
struct DatasetInfo {
  std::string id;
  std::string file;
  std::string target_column;
  TargetParse target_parse;
};

const std::vector<DatasetInfo>& builtin_datasets();

// Accepts aliases ("cancer", "boston").
std::optional<DatasetInfo> find_dataset(std::string_view id);

// Lookup order: explicit override, $IRKIT_CACHE, the source-tree data/ dir.
std::filesystem::path resolve_data_dir(
    const std::optional<std::filesystem::path>& override_dir = std::nullopt);

// Loads a builtin dataset with an all-numerical schema inferred from the
// header. Throws IoError when the file is not in the cache.
TabularDataset load_builtin_dataset(std::string_view id,
                                    const std::filesystem::path& data_dir);

// Reads only the header of a CSV.
std::vector<std::string> read_csv_header(const std::filesystem::path& path);

}  // namespace irkit

#endif  // IRKIT_CORE_DATASETS_H_
