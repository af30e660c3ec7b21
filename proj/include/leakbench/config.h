/*
 * Copyright 2026 The Leakbench Authors.
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

#ifndef LEAKBENCH_CONFIG_H_
#define LEAKBENCH_CONFIG_H_

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "leakbench/experiment.h"

namespace leakbench {

// Parses an experiment config. Unknown keys, wrong types and missing required
// fields raise ConfigError naming the offending field. When the dataset
// section names no source, `data_env` (the LEAKBENCH_DATA value) supplies the
// CSV path.
GridConfig config_from_json(const nlohmann::json& j,
                            const std::optional<std::string>& data_env = std::nullopt);

// Reads and parses a config file, consulting LEAKBENCH_DATA.
GridConfig load_config(const std::filesystem::path& path);

// Every field that affects results, with defaults filled in. Feeding the
// output back to config_from_json reproduces the same grid.
nlohmann::json config_to_json(const GridConfig& cfg);

}  // namespace leakbench

#endif  // LEAKBENCH_CONFIG_H_
