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

#include "leakbench/report.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "leakbench/common.h"

namespace leakbench {
namespace {

namespace fs = std::filesystem;

GridConfig tiny_grid(std::vector<std::size_t> n_values) {
  GridConfig cfg;
  SynthConfig s;
  s.n_samples = 800;
  s.positive_rate = 0.05;
  s.n_features = 3;
  cfg.dataset.synthetic = s;
  cfg.n_values = std::move(n_values);
  cfg.seeds = {1};
  cfg.model.epochs = 1;
  cfg.threads = 1;
  return cfg;
}

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

std::size_t count_substr(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) {
    ++n;
  }
  return n;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Report, CsvHasOneRowPerCell) {
  const GridReport r = run_grid(tiny_grid({0}));
  ASSERT_EQ(r.cells.size(), 2u);
  const fs::path dir = fresh_dir("leakbench_report_csv");
  const std::vector<std::string> formats{"csv"};
  const auto files = emit_report(r, dir, formats);
  // cells.csv plus the PRC and ROC point tables of each cell.
  ASSERT_EQ(files.size(), 1 + 2 * r.cells.size());
  EXPECT_EQ(files[0].filename(), "cells.csv");
  const std::string csv = slurp(files[0]);
  EXPECT_EQ(count_lines(csv), 3u);
  EXPECT_NE(csv.find("N0_leaky_s1,0,leaky,1,true"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir / "report.json"));
  EXPECT_FALSE(fs::exists(dir / "summary.md"));
  EXPECT_FALSE(fs::exists(dir / "curves" / "N0_leaky_s1_roc.svg"));
}

TEST(Report, MarkdownHasNineRowsPerProtocol) {
  const GridReport r = run_grid(tiny_grid({0, 1, 2, 4, 6, 8, 10, 12, 16}));
  const std::string md = summary_markdown(r);
  EXPECT_EQ(count_substr(md, "## Protocol: leaky"), 1u);
  EXPECT_EQ(count_substr(md, "## Protocol: clean"), 1u);
  std::istringstream lines(md);
  std::string line;
  std::size_t numbered = 0;
  while (std::getline(lines, line)) {
    if (line.size() > 2 && line[0] == '|' && line[2] >= '1' && line[2] <= '9') ++numbered;
  }
  // 9 per protocol table; the gap and comparison tables start with N, not No.
  EXPECT_GE(numbered, 18u);
  EXPECT_NE(md.find("| 9 | 16 |"), std::string::npos);
  EXPECT_NE(md.find("## Leakage gap"), std::string::npos);
  EXPECT_NE(md.find("of 36 cells within tolerance"), std::string::npos);
}

TEST(Report, SvgPerCell) {
  const GridReport r = run_grid(tiny_grid({0, 2}));
  const fs::path dir = fresh_dir("leakbench_report_svg");
  const std::vector<std::string> formats{"svg"};
  emit_report(r, dir, formats);
  for (const CellResult& c : r.cells) {
    for (const char* kind : {"_prc.svg", "_roc.svg"}) {
      const fs::path p = dir / "curves" / (c.key.str() + kind);
      ASSERT_TRUE(fs::exists(p)) << p;
      const std::string svg = slurp(p);
      EXPECT_EQ(svg.rfind("<svg", 0), 0u);
      EXPECT_NE(svg.find("<polyline"), std::string::npos);
    }
  }
  std::size_t n = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir / "curves")) ++n;
  EXPECT_EQ(n, 2 * r.cells.size());
}

TEST(Report, AllFormats) {
  const GridReport r = run_grid(tiny_grid({0}));
  const fs::path dir = fresh_dir("leakbench_report_all");
  const std::vector<std::string> formats{"json", "csv", "markdown", "svg"};
  const auto files = emit_report(r, dir, formats);
  EXPECT_EQ(files.size(), 3 + 4 * r.cells.size());
  for (const auto& f : files) EXPECT_TRUE(fs::exists(f)) << f;
  EXPECT_TRUE(fs::exists(dir / "curves" / "N0_clean_s1_roc.csv"));
}

TEST(Report, JsonRoundTrip) {
  const GridReport r = run_grid(tiny_grid({0, 2}));
  const nlohmann::json j = report_to_json(r);
  EXPECT_EQ(j["format"], "leakbench-report/1");
  const GridReport back = report_from_json(nlohmann::json::parse(j.dump()));
  ASSERT_EQ(back.cells.size(), r.cells.size());
  for (std::size_t i = 0; i < r.cells.size(); ++i) {
    EXPECT_EQ(back.cells[i].key, r.cells[i].key);
    EXPECT_EQ(back.cells[i].metrics, r.cells[i].metrics);
    EXPECT_EQ(back.cells[i].contamination, r.cells[i].contamination);
    EXPECT_EQ(back.cells[i].history, r.cells[i].history);
  }
  EXPECT_EQ(report_to_json(back), j);
}

TEST(Report, StripWallTimeRecursive) {
  nlohmann::json j = {{"wall_time_s", 1.5},
                      {"cells", {{{"key", "a"}, {"wall_time_s", 2.0}}}},
                      {"nested", {{"wall_time_s", 3.0}, {"keep", 1}}}};
  const nlohmann::json s = strip_wall_time(j);
  EXPECT_FALSE(s.contains("wall_time_s"));
  EXPECT_FALSE(s["cells"][0].contains("wall_time_s"));
  EXPECT_EQ(s["cells"][0]["key"], "a");
  EXPECT_EQ(s["nested"]["keep"], 1);
}

TEST(Report, FailedCellSerialized) {
  GridConfig cfg = tiny_grid({0});
  cfg.resampler.k_neighbors = 500;
  const GridReport r = run_grid(cfg);
  const nlohmann::json j = report_to_json(r);
  EXPECT_FALSE(j["cells"][0]["ok"].get<bool>());
  EXPECT_TRUE(j["cells"][0]["error"].is_string());
  EXPECT_TRUE(j["cells"][0]["roc"].is_null());
  EXPECT_TRUE(j["table1_deviation"].is_null());
  const fs::path dir = fresh_dir("leakbench_report_failed");
  const std::vector<std::string> formats{"json", "svg"};
  EXPECT_EQ(emit_report(r, dir, formats).size(), 1u);
}

TEST(Report, CurveCsv) {
  const std::vector<CurvePoint> pts{{0.0, 0.0}, {0.5, 0.75}, {1.0, 1.0}};
  EXPECT_EQ(curve_csv(pts, "fpr", "tpr"), "fpr,tpr\n0,0\n0.5,0.75\n1,1\n");
}

}  // namespace
}  // namespace leakbench
