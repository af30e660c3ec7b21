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

#include "cli.h"

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "json.hpp"

namespace leakbench {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "leakbench_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

json tiny_config() {
  return json::parse(R"({
    "dataset": {"synthetic": {"n_samples": 800, "positive_rate": 0.05, "n_features": 3}},
    "n_values": [0, 2],
    "seeds": [1],
    "model": {"epochs": 1},
    "threads": 1
  })");
}

fs::path write_config(const fs::path& dir, const json& j) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << j.dump(2);
  return p;
}

json read_json(const fs::path& p) { return json::parse(std::ifstream(p)); }

TEST(Cli, HelpExitsZero) {
  const Outcome o = invoke({"help"});
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("run"), std::string::npos);
  EXPECT_NE(o.out.find("audit"), std::string::npos);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({"run", "--config", "a.json", "--bogus"}).code, 2);
  EXPECT_EQ(invoke({"run"}).code, 2);
  EXPECT_EQ(invoke({"run", "--config", "a.json", "--formats", "pdf"}).code, 2);
  EXPECT_EQ(invoke({"run", "--config", "a.json", "--seed", "seven"}).code, 2);
}

TEST(Cli, MissingConfigNamesPath) {
  const Outcome o = invoke({"run", "--config", "/nonexistent/x.json"});
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("/nonexistent/x.json"), std::string::npos) << o.err;
}

TEST(Cli, MissingNValuesNamesField) {
  const fs::path dir = scratch("missing_n");
  json j = tiny_config();
  j.erase("n_values");
  const Outcome o = invoke({"run", "--config", write_config(dir, j).string()});
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("n_values"), std::string::npos) << o.err;
}

TEST(Cli, RunWritesFilesAndHonoursSeed) {
  const fs::path dir = scratch("run");
  const fs::path cfg = write_config(dir, tiny_config());
  const Outcome o =
      invoke({"run", "--config", cfg.string(), "--seed", "7", "--out", (dir / "out").string()});
  ASSERT_EQ(o.code, 0) << o.err;
  for (const char* f : {"report.json", "cells.csv", "summary.md"}) {
    EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
  }
  EXPECT_TRUE(fs::exists(dir / "out" / "curves" / "N2_clean_s1_prc.svg"));
  const json report = read_json(dir / "out" / "report.json");
  EXPECT_EQ(report["config"]["master_seed"], 7);
  EXPECT_EQ(report["cells"].size(), 4u);
}

TEST(Cli, EchoedConfigReproducesReport) {
  const fs::path dir = scratch("echo");
  const fs::path cfg = write_config(dir, tiny_config());
  ASSERT_EQ(invoke({"run", "--config", cfg.string(), "--seed", "5", "--formats", "json", "--out",
                    (dir / "a").string()})
                .code,
            0);
  const json first = read_json(dir / "a" / "report.json");
  const fs::path echo = dir / "echo.json";
  std::ofstream(echo) << first["config"].dump();
  ASSERT_EQ(invoke({"run", "--config", echo.string(), "--formats", "json", "--out",
                    (dir / "b").string()})
                .code,
            0);
  const json second = read_json(dir / "b" / "report.json");
  EXPECT_EQ(first["config"], second["config"]);
  for (std::size_t i = 0; i < first["cells"].size(); ++i) {
    json a = first["cells"][i], b = second["cells"][i];
    a.erase("wall_time_s");
    b.erase("wall_time_s");
    EXPECT_EQ(a, b) << i;
  }
}

TEST(Cli, AuditCleanOnly) {
  const fs::path dir = scratch("audit");
  json j = tiny_config();
  j["protocols"] = {"clean"};
  const Outcome o = invoke({"audit", "--config", write_config(dir, j).string()});
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("leak_flag=false"), std::string::npos) << o.out;
  EXPECT_EQ(o.out.find("leak_flag=true"), std::string::npos);
}

TEST(Cli, AuditBothProtocols) {
  const fs::path dir = scratch("audit_both");
  const Outcome o = invoke({"audit", "--config", write_config(dir, tiny_config()).string()});
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("N0_leaky_s1: "), std::string::npos);
  EXPECT_NE(o.out.find("leak_flag=true"), std::string::npos);
  EXPECT_NE(o.out.find("leakage_gap"), std::string::npos);
}

TEST(Cli, CurvesForOneCell) {
  const fs::path dir = scratch("curves");
  const Outcome o = invoke({"curves", "--config", write_config(dir, tiny_config()).string(),
                            "--hidden", "2", "--protocol", "clean", "--out", dir.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  for (const char* f : {"N2_clean_s1_prc.csv", "N2_clean_s1_prc.svg", "N2_clean_s1_roc.csv",
                        "N2_clean_s1_roc.svg"}) {
    EXPECT_TRUE(fs::exists(dir / "curves" / f)) << f;
  }
  EXPECT_EQ(invoke({"curves", "--config", (dir / "config.json").string(), "--protocol", "messy"})
                .code,
            2);
}

TEST(Cli, GenerateWritesCsv) {
  const fs::path dir = scratch("generate");
  const Outcome o = invoke({"generate", "--n-samples", "300", "--positive-rate", "0.1",
                            "--n-features", "2", "--out", dir.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  std::ifstream in(dir / "synthetic.csv");
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 301u);
  EXPECT_EQ(invoke({"generate", "--positive-rate", "2", "--out", dir.string()}).code, 2);
}

TEST(Cli, CellFailureExitsOne) {
  const fs::path dir = scratch("fail");
  json j = tiny_config();
  j["resampler"] = {{"k_neighbors", 500}};
  const Outcome o = invoke({"run", "--config", write_config(dir, j).string(), "--out",
                            (dir / "out").string()});
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.err.find("failed"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "out" / "report.json"));
}

TEST(Cli, ReportSubcommand) {
  const fs::path dir = scratch("report");
  ASSERT_EQ(invoke({"run", "--config", write_config(dir, tiny_config()).string(), "--formats",
                    "json", "--out", dir.string()})
                .code,
            0);
  const Outcome o = invoke({"report", "--in", (dir / "report.json").string(), "--out",
                            (dir / "again").string(), "--formats", "markdown"});
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_TRUE(fs::exists(dir / "again" / "summary.md"));
  EXPECT_NE(o.out.find("reference comparison unavailable"), std::string::npos);
  EXPECT_EQ(invoke({"report", "--in", (dir / "missing.json").string()}).code, 2);
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(LEAKBENCH_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(CliBinary, ExitCodes) {
  EXPECT_EQ(run_binary("help"), 0);
  EXPECT_EQ(run_binary("--help"), 0);
  EXPECT_EQ(run_binary("nonsense"), 2);
  EXPECT_EQ(run_binary("run --config /nonexistent/x.json"), 2);
  const fs::path dir = scratch("binary");
  json j = tiny_config();
  j["n_values"] = {0};
  j["protocols"] = {"clean"};
  const fs::path cfg = write_config(dir, j);
  EXPECT_EQ(run_binary("run --config " + cfg.string() + " --out " + dir.string()), 0);
  EXPECT_TRUE(fs::exists(dir / "report.json"));
}

}  // namespace
}  // namespace leakbench
