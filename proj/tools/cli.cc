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

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "leakbench/common.h"
#include "leakbench/config.h"
#include "leakbench/data.h"
#include "leakbench/experiment.h"
#include "leakbench/report.h"

namespace leakbench::cli {
namespace {

const std::vector<std::string> kAllFormats{"json", "csv", "markdown", "svg"};

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  bool allow_quadratic = false;
  std::vector<std::string> formats;
  std::optional<std::size_t> threads;
};

void add_common(CLI::App* cmd, Overrides& o, bool config_required) {
  auto* c = cmd->add_option("--config", o.config_path, "Experiment config (JSON)");
  if (config_required) c->required();
  cmd->add_option("--seed", o.seed, "Override master_seed");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_flag("--allow-quadratic", o.allow_quadratic,
                "Permit O(n^2) resamplers on large inputs");
  cmd->add_option("--formats", o.formats, "Comma-separated subset of json,csv,markdown,svg")
      ->delimiter(',')
      ->check(CLI::IsMember(kAllFormats));
  cmd->add_option("--threads", o.threads, "Worker threads (0 = hardware)");
}

GridConfig load_with_overrides(const Overrides& o) {
  GridConfig cfg = load_config(o.config_path);
  if (o.seed) cfg.master_seed = *o.seed;
  if (o.out) cfg.output_dir = *o.out;
  if (o.allow_quadratic) cfg.resampler.allow_quadratic = true;
  if (!o.formats.empty()) cfg.formats = o.formats;
  if (o.threads) cfg.threads = *o.threads;
  cfg.validate();
  return cfg;
}

std::string fmt(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", *v);
  return buf;
}

void print_contamination(std::ostream& out, const CellResult& c) {
  const ContaminationReport& r = c.contamination;
  out << c.key.str() << ": n_test_rows=" << r.n_test_rows
      << " n_synthetic_in_test=" << r.n_synthetic_in_test
      << " n_synthetic_in_test_with_parent_in_train="
      << r.n_synthetic_in_test_with_parent_in_train
      << " n_exact_duplicates_across_split=" << r.n_exact_duplicates_across_split
      << " leak_flag=" << (r.leak_flag ? "true" : "false") << " f1=" << fmt(c.metrics.scalars.f1)
      << "\n";
  for (const std::string& f : c.findings) out << "  finding: " << f << "\n";
  for (const std::string& w : c.resample_warnings) out << "  warning: " << w << "\n";
}

int cmd_generate(const Overrides& o, SynthConfig synth, bool synth_flags_set,
                 std::ostream& out) {
  if (!o.config_path.empty()) {
    const GridConfig cfg = load_config(o.config_path);
    if (!cfg.dataset.synthetic) {
      throw ConfigError("generate: config " + o.config_path + " has no synthetic dataset");
    }
    if (!synth_flags_set) synth = *cfg.dataset.synthetic;
  }
  if (o.seed) synth.seed = *o.seed;
  try {
    synth.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  const std::filesystem::path dir = o.out.value_or(".");
  std::filesystem::create_directories(dir);
  const std::filesystem::path path = dir / "synthetic.csv";
  write_csv(generate_synthetic(synth), path);
  out << "wrote " << path.string() << "\n";
  return kExitOk;
}

int cmd_run(const Overrides& o, std::ostream& out, std::ostream& err) {
  const GridConfig cfg = load_with_overrides(o);
  const GridReport report = run_grid(cfg);
  const auto files = emit_report(report, cfg.output_dir, cfg.formats);
  std::size_t failed = 0;
  for (const CellResult& c : report.cells) {
    if (!c.ok) {
      ++failed;
      err << "cell " << c.key.str() << " failed: " << c.error << "\n";
    }
  }
  out << report.cells.size() << " cells, " << failed << " failed; " << files.size()
      << " files written to " << cfg.output_dir << "\n";
  return failed ? kExitCellFailure : kExitOk;
}

int cmd_audit(const Overrides& o, std::ostream& out, std::ostream& err) {
  const GridConfig cfg = load_with_overrides(o);
  const Dataset ds = load_dataset(cfg.dataset);
  std::vector<CellResult> cells;
  for (const Ordering p : cfg.protocols) {
    cells.push_back(run_cell(cfg, ds, {cfg.n_values.front(), p, cfg.seeds.front()}));
  }
  bool failed = false;
  for (const CellResult& c : cells) {
    if (!c.ok) {
      failed = true;
      err << "cell " << c.key.str() << " failed: " << c.error << "\n";
      continue;
    }
    print_contamination(out, c);
  }
  const auto find = [&](Ordering p) -> const CellResult* {
    for (const CellResult& c : cells) {
      if (c.key.protocol == p && c.ok) return &c;
    }
    return nullptr;
  };
  const CellResult* leaky = find(Ordering::kLeaky);
  const CellResult* clean = find(Ordering::kClean);
  if (leaky && clean) {
    const auto& a = leaky->metrics.scalars.f1;
    const auto& b = clean->metrics.scalars.f1;
    out << "leakage_gap f1(leaky)-f1(clean)="
        << (a && b ? fmt(*a - *b) : std::string("n/a")) << "\n";
  }
  return failed ? kExitCellFailure : kExitOk;
}

int cmd_curves(const Overrides& o, std::optional<std::size_t> hidden,
               std::optional<std::string> protocol, std::optional<std::uint64_t> cell_seed,
               std::ostream& out, std::ostream& err) {
  GridConfig cfg = load_with_overrides(o);
  CellKey key{hidden.value_or(cfg.n_values.front()), cfg.protocols.front(),
              cell_seed.value_or(cfg.seeds.front())};
  if (protocol) {
    try {
      key.protocol = ordering_from_string(*protocol);
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  const Dataset ds = load_dataset(cfg.dataset);
  const CellResult cell = run_cell(cfg, ds, key);
  if (!cell.ok) {
    err << "cell " << key.str() << " failed: " << cell.error << "\n";
    return kExitCellFailure;
  }
  std::vector<std::string> formats;
  for (const std::string& f : cfg.formats) {
    if (f == "csv" || f == "svg") formats.push_back(f);
  }
  if (formats.empty()) formats = {"csv", "svg"};
  for (const auto& p : write_curve_files(cell, cfg.output_dir, formats)) {
    out << "wrote " << p.string() << "\n";
  }
  return kExitOk;
}

int cmd_report(const std::string& in_path, const Overrides& o, std::ostream& out) {
  std::ifstream in(in_path);
  if (!in) throw ConfigError("cannot read report file: " + in_path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("report file " + in_path + " is not valid JSON: " + e.what());
  }
  GridReport report;
  try {
    report = report_from_json(j);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (o.out) {
    const std::vector<std::string> formats = o.formats.empty() ? kAllFormats : o.formats;
    emit_report(report, *o.out, formats);
    out << "re-emitted report to " << *o.out << "\n";
  }
  try {
    const auto devs = compare_to_table1(report);
    std::size_t within = 0;
    out << "N metric reference observed deviation\n";
    for (const Deviation& d : devs) {
      if (!d.flagged) ++within;
      out << d.hidden << ' ' << d.metric << ' ' << fmt(d.reference) << ' ' << fmt(d.observed)
          << ' ' << fmt(d.deviation) << (d.flagged ? " FLAGGED" : "") << "\n";
    }
    out << within << "/" << devs.size() << " within " << kTable1Tolerance << "\n";
  } catch (const Error& e) {
    out << "reference comparison unavailable: " << e.what() << "\n";
  }
  return report.any_failed() ? kExitCellFailure : kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Leaky versus clean evaluation of imbalanced classifiers", "leakbench"};
  app.require_subcommand(1);

  Overrides gen_o;
  SynthConfig synth;
  auto* gen = app.add_subcommand("generate", "Write a synthetic dataset to <out>/synthetic.csv");
  gen->add_option("--config", gen_o.config_path, "Take the synthetic section of this config");
  gen->add_option("--seed", gen_o.seed, "Generator seed");
  gen->add_option("--out", gen_o.out, "Output directory");
  gen->add_option("--n-samples", synth.n_samples, "Rows");
  gen->add_option("--positive-rate", synth.positive_rate, "Fraction of positive rows");
  gen->add_option("--n-features", synth.n_features, "Feature columns");
  gen->add_option("--separation", synth.class_separation, "Distance between class means");
  gen->add_flag("--fraud-burst", synth.fraud_burst, "Concentrate positives late in time");

  Overrides run_o;
  auto* run_cmd = app.add_subcommand("run", "Run the experiment grid and write reports");
  add_common(run_cmd, run_o, true);

  Overrides audit_o;
  auto* audit = app.add_subcommand(
      "audit", "Run each protocol once and print its contamination report");
  add_common(audit, audit_o, true);

  Overrides curves_o;
  std::optional<std::size_t> hidden;
  std::optional<std::string> protocol;
  std::optional<std::uint64_t> cell_seed;
  auto* curves = app.add_subcommand("curves", "Write PRC and ROC files for one cell");
  add_common(curves, curves_o, true);
  curves->add_option("--hidden", hidden, "Hidden width N (default: first in grid)");
  curves->add_option("--protocol", protocol, "leaky or clean (default: first in grid)");
  curves->add_option("--cell-seed", cell_seed, "Seed value of the cell (default: first)");

  Overrides report_o;
  std::string report_in;
  auto* report = app.add_subcommand(
      "report", "Re-emit an existing report.json and print the reference comparison");
  report->add_option("--in", report_in, "report.json to read")->required();
  report->add_option("--out", report_o.out, "Re-emit outputs into this directory");
  report->add_option("--formats", report_o.formats, "Formats to re-emit")
      ->delimiter(',')
      ->check(CLI::IsMember(kAllFormats));

  app.add_subcommand("help", "Print usage");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (app.got_subcommand("help")) {
      // help() describes the selected subcommand; forget it to get the overview.
      app.clear();
      out << app.help("", CLI::AppFormatMode::All);
      return kExitOk;
    }
    if (*gen) {
      const bool flags_set = gen->count("--n-samples") || gen->count("--positive-rate") ||
                             gen->count("--n-features") || gen->count("--separation") ||
                             gen->count("--fraud-burst");
      return cmd_generate(gen_o, synth, flags_set, out);
    }
    if (*run_cmd) return cmd_run(run_o, out, err);
    if (*audit) return cmd_audit(audit_o, out, err);
    if (*curves) return cmd_curves(curves_o, hidden, protocol, cell_seed, out, err);
    if (*report) return cmd_report(report_in, report_o, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitCellFailure;
  }
  return kExitUsage;
}

}  // namespace leakbench::cli
