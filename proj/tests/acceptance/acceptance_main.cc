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

// Acceptance gate. Prints one line per criterion and exits nonzero only when
// a criterion fails; criteria that need the real fraud CSV print SKIP unless
// LEAKBENCH_DATA points at it.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "leakbench/common.h"
#include "leakbench/config.h"
#include "leakbench/experiment.h"
#include "leakbench/metrics.h"
#include "leakbench/report.h"
#include "properties.h"

namespace fs = std::filesystem;
using namespace leakbench;

namespace {

constexpr double kMinGap = 0.05;
constexpr double kMinTrendRise = 0.02;
constexpr std::size_t kMaxInversions = 1;
constexpr std::size_t kMinWithinTolerance = 30;
constexpr double kBaselineAccuracy = 0.9983;
constexpr double kBaselineTol = 0.0001;

enum class Verdict { kPass, kFail, kSkip };

struct Gate {
  int failures = 0;
  void report(int id, const char* name, Verdict v, const std::string& detail) {
    const char* tag = v == Verdict::kPass ? "PASS" : v == Verdict::kFail ? "FAIL" : "SKIP";
    if (v == Verdict::kFail) ++failures;
    std::printf("%s criterion %d %s: %s\n", tag, id, name, detail.c_str());
    std::fflush(stdout);
  }
};

std::string num(double v, const char* spec = "%.4f") {
  char buf[48];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::optional<std::string> data_env() {
  const char* p = std::getenv("LEAKBENCH_DATA");
  if (!p || !*p) return std::nullopt;
  return std::string(p);
}

GridConfig desk_config() {
  GridConfig cfg;
  SynthConfig s;
  s.n_samples = 20000;
  s.positive_rate = 0.005;
  s.class_separation = 2.0;
  cfg.dataset.synthetic = s;
  cfg.n_values = {0, 1, 2, 4, 6, 8, 10, 12, 16};
  cfg.seeds = {1, 2, 3, 4, 5};
  cfg.scaler = ScalerMethod::kStandardize;
  return cfg;
}

std::optional<double> f1_median(const GridReport& r, std::size_t n, Ordering o) {
  const Aggregate* a = r.find(n, o);
  if (!a) return std::nullopt;
  return a->metrics.at("f1").median;
}

void leakage_gap(Gate& gate, const GridReport& r) {
  bool ok = !r.any_failed();
  std::ostringstream detail;
  for (const std::size_t n : {0, 1, 4, 16}) {
    const auto leaky = f1_median(r, n, Ordering::kLeaky);
    const auto clean = f1_median(r, n, Ordering::kClean);
    if (!leaky || !clean) {
      ok = false;
      detail << "N=" << n << " gap=n/a ";
      continue;
    }
    const double gap = *leaky - *clean;
    ok = ok && gap >= kMinGap;
    detail << "N=" << n << " gap=" << num(gap) << " ";
  }
  std::size_t wrong_flags = 0;
  for (const CellResult& c : r.cells) {
    if (c.contamination.leak_flag != (c.key.protocol == Ordering::kLeaky)) ++wrong_flags;
  }
  ok = ok && wrong_flags == 0;
  detail << "(min " << kMinGap << "); leak_flag mismatches=" << wrong_flags << "/"
         << r.cells.size();
  gate.report(1, "leakage-gap", ok ? Verdict::kPass : Verdict::kFail, detail.str());
}

void trend(Gate& gate, const GridReport& r, const std::vector<std::size_t>& grid,
           const std::string& source) {
  std::vector<double> f1;
  std::ostringstream detail;
  detail << source << " leaky F1:";
  for (const std::size_t n : grid) {
    const auto v = f1_median(r, n, Ordering::kLeaky);
    if (!v) {
      gate.report(2, "trend", Verdict::kFail, "undefined F1 median at N=" + std::to_string(n));
      return;
    }
    f1.push_back(*v);
    detail << " " << num(*v, "%.3f");
  }
  std::size_t inversions = 0;
  for (std::size_t i = 1; i < f1.size(); ++i) inversions += f1[i] < f1[i - 1];
  const double rise = f1.back() - f1.front();
  detail << "; inversions=" << inversions << " (max " << kMaxInversions
         << "), F1(16)-F1(0)=" << num(rise) << " (min " << kMinTrendRise << ")";
  const bool ok = inversions <= kMaxInversions && rise >= kMinTrendRise;
  gate.report(2, "trend", ok ? Verdict::kPass : Verdict::kFail, detail.str());
}

void value_reproduction(Gate& gate, const fs::path& config_dir) {
  const auto csv = data_env();
  if (!csv) {
    gate.report(3, "table-values", Verdict::kSkip,
                "LEAKBENCH_DATA not set; the fraud CSV is not bundled");
    return;
  }
  try {
    const GridConfig cfg = load_config(config_dir / "table1.json");
    const GridReport r = run_grid(cfg);
    const auto devs = compare_to_table1(r);
    std::size_t within = 0;
    for (const Deviation& d : devs) within += !d.flagged;
    std::ostringstream detail;
    detail << within << "/" << devs.size() << " (N, metric) cells within "
           << kTable1Tolerance << " (need " << kMinWithinTolerance << ")";
    gate.report(3, "table-values", within >= kMinWithinTolerance ? Verdict::kPass : Verdict::kFail,
                detail.str());
  } catch (const std::exception& e) {
    gate.report(3, "table-values", Verdict::kFail, e.what());
  }
}

double all_negative_accuracy(const Dataset& ds) {
  const std::vector<int> predictions(ds.labels.size(), 0);
  return *compute_metrics(confusion(ds.labels, predictions)).accuracy;
}

void majority_baseline(Gate& gate) {
  const SynthConfig synth = *desk_config().dataset.synthetic;
  const Dataset ds = generate_synthetic(synth);
  const double acc = all_negative_accuracy(ds);
  const double expected = 1.0 - synth.positive_rate;
  std::ostringstream detail;
  detail << "synthetic accuracy=" << num(acc, "%.17g") << " vs 1-rate=" << num(expected, "%.17g");
  bool ok = acc == expected;
  Verdict v = ok ? Verdict::kPass : Verdict::kFail;
  if (const auto csv = data_env()) {
    try {
      const double real = all_negative_accuracy(load_csv(*csv, true));
      const bool real_ok = std::abs(real - kBaselineAccuracy) <= kBaselineTol;
      detail << "; real accuracy=" << num(real, "%.5f") << " (" << kBaselineAccuracy << " +/- "
             << kBaselineTol << ")";
      if (!real_ok) v = Verdict::kFail;
    } catch (const std::exception& e) {
      detail << "; real CSV failed: " << e.what();
      v = Verdict::kFail;
    }
  } else {
    detail << "; real-data half skipped (LEAKBENCH_DATA not set)";
  }
  gate.report(4, "majority-baseline", v, detail.str());
}

void property_suites(Gate& gate) {
  using namespace leakbench::testing;
  const std::pair<const char*, SuiteOutcome> suites[] = {
      {"gradient", gradient_check_suite()}, {"auc", auc_suite()},
      {"smote", smote_geometry_suite()},    {"neighbors", neighbor_oracle_suite()},
      {"split", split_suite()}};
  bool ok = true;
  std::ostringstream detail;
  for (const auto& [name, s] : suites) {
    ok = ok && s.all_passed();
    detail << name << "=" << s.passed << "/" << s.total << " ";
    if (!s.all_passed()) detail << "[" << s.first_failure << "] ";
  }
  gate.report(5, "property-suites", ok ? Verdict::kPass : Verdict::kFail, detail.str());
}

int spawn(const std::string& cli, const std::string& args) {
  const std::string cmd = cli + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void determinism(Gate& gate, const std::string& cli, const fs::path& work) {
  const nlohmann::json cfg = nlohmann::json::parse(R"({
    "dataset": {"synthetic": {"n_samples": 4000, "positive_rate": 0.01, "n_features": 8}},
    "n_values": [0, 4],
    "seeds": [1, 2],
    "resampler": {"method": "smote_tomek"},
    "scaler": {"method": "standardize"},
    "model": {"epochs": 3}
  })");
  const fs::path path = work / "determinism.json";
  std::ofstream(path) << cfg.dump(2);
  std::vector<std::string> reports;
  const char* variants[] = {"a --threads 1", "b --threads 1", "c --threads 3"};
  for (const char* v : variants) {
    const std::string tag(v, 1);
    const std::string args = "run --config " + path.string() + " --formats json --out " +
                             (work / tag).string() + std::string(v + 1);
    const int code = spawn(cli, args);
    if (code != 0) {
      gate.report(6, "determinism", Verdict::kFail,
                  "run " + tag + " exited " + std::to_string(code));
      return;
    }
    std::ifstream in(work / tag / "report.json");
    reports.push_back(strip_wall_time(nlohmann::json::parse(in)).dump(1));
  }
  const bool repeat = reports[0] == reports[1];
  const bool threads = reports[0] == reports[2];
  gate.report(6, "determinism", repeat && threads ? Verdict::kPass : Verdict::kFail,
              std::string("repeat run ") + (repeat ? "identical" : "DIFFERS") +
                  ", 3-thread run " + (threads ? "identical" : "DIFFERS") + " (" +
                  std::to_string(reports[0].size()) + " bytes, wall time excluded)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"leakbench acceptance gate"};
  std::string cli;
  std::string work = "acceptance_work";
  std::string config_dir = LEAKBENCH_CONFIG_DIR;
  app.add_option("--cli", cli, "Path to the leakbench binary")->required();
  app.add_option("--work-dir", work, "Scratch directory");
  app.add_option("--config-dir", config_dir, "Directory holding table1.json");
  CLI11_PARSE(app, argc, argv);
  fs::create_directories(work);

  Gate gate;
  try {
    const GridConfig cfg = desk_config();
    const GridReport desk = run_grid(cfg);
    emit_report(desk, fs::path(work) / "desk", std::vector<std::string>{"json", "markdown"});
    leakage_gap(gate, desk);
    trend(gate, desk, cfg.n_values, "desk synthetic");
  } catch (const std::exception& e) {
    gate.report(1, "leakage-gap", Verdict::kFail, e.what());
    gate.report(2, "trend", Verdict::kFail, e.what());
  }
  value_reproduction(gate, config_dir);
  majority_baseline(gate);
  property_suites(gate);
  determinism(gate, cli, work);
  std::printf("%s: %d criterion failure(s)\n", gate.failures ? "FAIL" : "PASS", gate.failures);
  return gate.failures ? 1 : 0;
}
