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

#include "leakbench/experiment.h"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "leakbench/common.h"
#include "leakbench/config.h"
#include "leakbench/rng.h"

namespace leakbench {
namespace {

enum Stream : std::uint64_t { kResampler = 1, kSplit = 2, kModel = 3 };

// Leaky-protocol results of the single-hidden-layer MLP on the full
// credit-card dataset, one row per hidden width.
constexpr std::array<Table1Row, 9> kTable1{{
    {0, 0.958, 0.976, 0.939, 0.958},
    {1, 0.959, 0.985, 0.932, 0.957},
    {2, 0.967, 0.976, 0.958, 0.967},
    {4, 0.982, 0.980, 0.983, 0.982},
    {6, 0.982, 0.985, 0.979, 0.982},
    {8, 0.986, 0.988, 0.985, 0.986},
    {10, 0.992, 0.989, 0.994, 0.992},
    {12, 0.992, 0.991, 0.992, 0.992},
    {16, 0.996, 0.992, 0.999, 0.996},
}};

}  // namespace

Dataset load_dataset(const DatasetSource& source) {
  Dataset ds;
  if (source.synthetic) {
    ds = generate_synthetic(*source.synthetic);
  } else if (source.csv_path) {
    ds = load_csv(*source.csv_path, source.expect_schema);
  } else {
    throw ConfigError("dataset: neither 'csv' nor 'synthetic' is set");
  }
  if (!source.columns.empty()) ds = select_columns(ds, source.columns);
  return expand_features(ds, source.feature_degree);
}

void GridConfig::validate() const {
  if (n_values.empty()) throw ConfigError("n_values: must be non-empty");
  if (protocols.empty()) throw ConfigError("protocols: must be non-empty");
  if (seeds.empty()) throw ConfigError("seeds: must be non-empty");
  if (dataset.feature_degree != 1 && dataset.feature_degree != 2) {
    throw ConfigError("dataset.feature_degree: must be 1 or 2");
  }
  try {
    resampler.validate();
    MlpConfig m = model;
    m.n_features = 1;
    m.validate();
    if (dataset.synthetic) dataset.synthetic->validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (!(split.test_fraction > 0.0 && split.test_fraction < 1.0)) {
    throw ConfigError("split.test_fraction: must be in (0, 1)");
  }
}

std::string CellKey::str() const {
  return "N" + std::to_string(hidden) + "_" + std::string(to_string(protocol)) + "_s" +
         std::to_string(seed);
}

std::uint64_t cell_seed(std::uint64_t master_seed, const CellKey& key) {
  return mix_seed({master_seed, key.hidden, static_cast<std::uint64_t>(key.protocol),
                   key.seed});
}

std::optional<double> median(std::vector<double> values) {
  if (values.empty()) return std::nullopt;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid),
                   values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(
      values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lower + upper) / 2.0;
}

std::optional<double> cell_metric(const CellResult& cell, const std::string& name) {
  if (!cell.ok) return std::nullopt;
  const ScalarMetrics& s = cell.metrics.scalars;
  if (name == "accuracy") return s.accuracy;
  if (name == "precision") return s.precision;
  if (name == "recall") return s.recall;
  if (name == "specificity") return s.specificity;
  if (name == "f1") return s.f1;
  if (name == "auc") {
    if (cell.metrics.roc) return cell.metrics.roc->auc;
    return std::nullopt;
  }
  if (name == "average_precision") {
    if (cell.metrics.prc) return cell.metrics.prc->average_precision;
    return std::nullopt;
  }
  throw Error("cell_metric: unknown metric '" + name + "'");
}

bool GridReport::any_failed() const {
  return std::any_of(cells.begin(), cells.end(), [](const CellResult& c) { return !c.ok; });
}

const Aggregate* GridReport::find(std::size_t hidden, Ordering protocol) const {
  for (const Aggregate& a : aggregates) {
    if (a.hidden == hidden && a.protocol == protocol) return &a;
  }
  return nullptr;
}

std::vector<Aggregate> aggregate_cells(const std::vector<CellResult>& cells,
                                       std::span<const std::size_t> n_values,
                                       std::span<const Ordering> protocols) {
  std::vector<Aggregate> out;
  for (const std::size_t n : n_values) {
    for (const Ordering proto : protocols) {
      Aggregate agg;
      agg.hidden = n;
      agg.protocol = proto;
      std::vector<const CellResult*> members;
      for (const CellResult& c : cells) {
        if (c.key.hidden == n && c.key.protocol == proto) members.push_back(&c);
      }
      agg.n_cells = members.size();
      for (const CellResult* c : members) {
        if (!c->ok) ++agg.n_failed;
        if (c->ok && c->contamination.leak_flag) ++agg.n_leak_flagged;
      }
      for (const std::string& name : summary_metric_names()) {
        std::vector<double> values;
        for (const CellResult* c : members) {
          if (const auto v = cell_metric(*c, name)) values.push_back(*v);
        }
        MetricSummary s;
        s.n_defined = values.size();
        if (!values.empty()) {
          s.min = *std::min_element(values.begin(), values.end());
          s.max = *std::max_element(values.begin(), values.end());
        }
        s.median = median(std::move(values));
        agg.metrics[name] = s;
      }
      out.push_back(std::move(agg));
    }
  }
  return out;
}

CellResult run_cell(const GridConfig& cfg, const Dataset& ds, const CellKey& key,
                    RunArtifacts* artifacts) {
  CellResult cell;
  cell.key = key;
  const auto start = std::chrono::steady_clock::now();
  try {
    const std::uint64_t root = cell_seed(cfg.master_seed, key);
    ProtocolSpec proto;
    proto.ordering = key.protocol;
    proto.split = cfg.split;
    proto.split.seed = mix_seed({root, kSplit});
    proto.scaler = cfg.scaler;
    proto.scale_columns = cfg.scale_columns;
    proto.resampler = cfg.resampler;
    proto.resampler.seed = mix_seed({root, kResampler});
    MlpConfig model = cfg.model;
    model.hidden = key.hidden;
    model.seed = mix_seed({root, kModel});

    RunArtifacts art = run_protocol(ds, proto, model);
    cell.ok = true;
    cell.metrics = art.eval;
    cell.contamination = art.contamination;
    cell.history = art.history;
    cell.n_train = art.n_train;
    cell.n_synthetic = art.n_synthetic;
    cell.n_removed = art.n_removed;
    cell.resample_warnings = art.resample_warnings;
    cell.findings = art.findings;
    if (artifacts) *artifacts = std::move(art);
  } catch (const std::exception& e) {
    cell.ok = false;
    cell.error = e.what();
  }
  cell.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return cell;
}

GridReport run_grid(const GridConfig& cfg) {
  cfg.validate();
  return run_grid(cfg, load_dataset(cfg.dataset));
}

GridReport run_grid(const GridConfig& cfg, const Dataset& ds) {
  cfg.validate();
  std::vector<CellKey> keys;
  for (const std::size_t n : cfg.n_values) {
    for (const Ordering proto : cfg.protocols) {
      for (const std::uint64_t seed : cfg.seeds) keys.push_back({n, proto, seed});
    }
  }

  std::vector<CellResult> cells(keys.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < keys.size(); i = next++) {
      cells[i] = run_cell(cfg, ds, keys[i]);
    }
  };
  std::size_t threads = cfg.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, keys.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  GridReport report;
  report.config_echo = config_to_json(cfg);
  if (cfg.dataset.synthetic) {
    const SynthConfig& s = *cfg.dataset.synthetic;
    report.dataset_description =
        "synthetic(n_samples=" + std::to_string(s.n_samples) +
        ", positive_rate=" + nlohmann::json(s.positive_rate).dump() +
        ", n_features=" + std::to_string(s.n_features) +
        ", class_separation=" + nlohmann::json(s.class_separation).dump() +
        ", seed=" + std::to_string(s.seed) + ")";
  } else {
    report.dataset_description = "csv(" + cfg.dataset.csv_path.value_or("") + ")";
  }
  report.dataset_rows = ds.rows();
  report.dataset_positives = ds.count_label(1);
  report.dataset_features = ds.cols();
  report.test_fraction = cfg.split.test_fraction;
  report.cells = std::move(cells);
  report.aggregates = aggregate_cells(report.cells, cfg.n_values, cfg.protocols);
  return report;
}

std::span<const Table1Row> table1_reference() { return kTable1; }

std::vector<Deviation> compare_to_table1(const GridReport& report) {
  return compare_to_table1(report, table1_reference());
}

std::vector<Deviation> compare_to_table1(const GridReport& report,
                                         std::span<const Table1Row> reference,
                                         double tolerance) {
  std::string missing;
  for (const Table1Row& row : reference) {
    const Aggregate* agg = report.find(row.hidden, Ordering::kLeaky);
    if (!agg || agg->n_cells == 0) missing += " N=" + std::to_string(row.hidden);
  }
  if (!missing.empty()) {
    throw Error("compare_to_table1: no leaky cells for" + missing);
  }
  std::vector<Deviation> out;
  for (const Table1Row& row : reference) {
    const Aggregate* agg = report.find(row.hidden, Ordering::kLeaky);
    const std::pair<const char*, double> refs[] = {{"accuracy", row.accuracy},
                                                   {"precision", row.precision},
                                                   {"recall", row.recall},
                                                   {"f1", row.f1}};
    for (const auto& [name, value] : refs) {
      Deviation d;
      d.hidden = row.hidden;
      d.metric = name;
      d.reference = value;
      d.observed = agg->metrics.at(name).median;
      if (d.observed) d.deviation = std::abs(*d.observed - value);
      d.flagged = !d.deviation || *d.deviation > tolerance;
      out.push_back(d);
    }
  }
  return out;
}

}  // namespace leakbench
