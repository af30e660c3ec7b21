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

#ifndef LEAKBENCH_REPORT_H_
#define LEAKBENCH_REPORT_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "leakbench/experiment.h"
#include "leakbench/metrics.h"

namespace leakbench {

// Keys holding wall-clock measurements; everything else in report.json is a
// deterministic function of the config.
inline constexpr const char* kWallTimeKey = "wall_time_s";

nlohmann::json report_to_json(const GridReport& report);
GridReport report_from_json(const nlohmann::json& j);

// Copy of a report document with every wall-time field removed.
nlohmann::json strip_wall_time(nlohmann::json j);

// Per-cell table, one row per cell.
std::string cells_csv(const GridReport& report);

// Reference-style table per protocol, the leaky-minus-clean F1 gap, and the
// reference comparison when the grid covers it.
std::string summary_markdown(const GridReport& report);

std::string curve_csv(const std::vector<CurvePoint>& points, const std::string& x_name,
                      const std::string& y_name);

// Polyline plot on the unit square with labelled axes.
std::string curve_svg(const std::vector<CurvePoint>& points, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      bool diagonal);

// Writes curves/<cellkey>_{prc,roc}.{csv,svg} for the requested formats.
std::vector<std::filesystem::path> write_curve_files(
    const CellResult& cell, const std::filesystem::path& out_dir,
    std::span<const std::string> formats);

// Writes report.json, cells.csv, summary.md and curve files according to
// `formats` (json, csv, markdown, svg). Returns the paths written.
std::vector<std::filesystem::path> emit_report(const GridReport& report,
                                               const std::filesystem::path& out_dir,
                                               std::span<const std::string> formats);

}  // namespace leakbench

#endif  // LEAKBENCH_REPORT_H_
