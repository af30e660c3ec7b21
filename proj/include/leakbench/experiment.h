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

#ifndef LEAKBENCH_EXPERIMENT_H_
#define LEAKBENCH_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "leakbench/data.h"
#include "leakbench/metrics.h"
#include "leakbench/model.h"
#include "leakbench/pipeline.h"
#include "leakbench/resample.h"

namespace leakbench {

struct DatasetSource {
  // Exactly one of csv_path / synthetic is set after config resolution.
  std::optional<std::string> csv_path;
  bool expect_schema = true;
  std::optional<SynthConfig> synthetic;
  // Model input columns; empty keeps every feature column.
  std::vector<std::string> columns;
  int feature_degree = 1;
};

// Loads or generates the dataset, then applies column selection and feature
// expansion.
Dataset load_dataset(const DatasetSource& source);

struct GridConfig {
  DatasetSource dataset;
  std::vector<std::size_t> n_values{0, 1, 2, 4, 6, 8, 10, 12, 16};
  std::vector<Ordering> protocols{Ordering::kLeaky, Ordering::kClean};
  // Seeds inside these specs are ignored; every cell derives its own.
  ResamplerSpec resampler;
  SplitSpec split;
  ScalerMethod scaler = ScalerMethod::kNone;
  std::vector<std::string> scale_columns;
  MlpConfig model;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::uint64_t master_seed = 0;

  // Runtime options; they do not affect results and are not echoed.
  std::string output_dir = "leakbench_out";
  std::vector<std::string> formats{"json", "csv", "markdown", "svg"};
  std::size_t threads = 0;

  void validate() const;
};

struct CellKey {
  std::size_t hidden = 0;
  Ordering protocol = Ordering::kLeaky;
  std::uint64_t seed = 0;

  // e.g. "N4_leaky_s3"
  std::string str() const;
  bool operator==(const CellKey&) const = default;
};

// RNG root of one grid cell: a hash of the master seed, N, protocol and seed.
std::uint64_t cell_seed(std::uint64_t master_seed, const CellKey& key);

struct CellResult {
  CellKey key;
  bool ok = false;
  std::string error;
  MetricReport metrics;
  ContaminationReport contamination;
  std::vector<double> history;
  std::size_t n_train = 0;
  std::size_t n_synthetic = 0;
  std::size_t n_removed = 0;
  std::vector<std::string> resample_warnings;
  std::vector<std::string> findings;
  double wall_time_s = 0.0;
};

struct MetricSummary {
  std::optional<double> median;
  std::optional<double> min;
  std::optional<double> max;
  std::size_t n_defined = 0;
};

inline const std::vector<std::string>& summary_metric_names() {
  static const std::vector<std::string> names{
      "accuracy", "precision", "recall", "specificity", "f1", "auc", "average_precision"};
  return names;
}

struct Aggregate {
  std::size_t hidden = 0;
  Ordering protocol = Ordering::kLeaky;
  std::size_t n_cells = 0;
  std::size_t n_failed = 0;
  std::size_t n_leak_flagged = 0;
  std::map<std::string, MetricSummary> metrics;
};

// Median of the values (mean of the middle pair for even counts); empty input
// has none.
std::optional<double> median(std::vector<double> values);

// Named scalar of a cell (see summary_metric_names), absent when undefined.
std::optional<double> cell_metric(const CellResult& cell, const std::string& name);

struct GridReport {
  nlohmann::json config_echo;
  std::string dataset_description;
  std::size_t dataset_rows = 0;
  std::size_t dataset_positives = 0;
  std::size_t dataset_features = 0;
  double test_fraction = 0.2;
  std::vector<CellResult> cells;
  std::vector<Aggregate> aggregates;

  bool any_failed() const;
  const Aggregate* find(std::size_t hidden, Ordering protocol) const;
};

std::vector<Aggregate> aggregate_cells(const std::vector<CellResult>& cells,
                                       std::span<const std::size_t> n_values,
                                       std::span<const Ordering> protocols);

// Runs every (N, protocol, seed) cell. Failed cells are recorded and the rest
// proceed. Output order follows the grid, independent of scheduling.
GridReport run_grid(const GridConfig& cfg);
GridReport run_grid(const GridConfig& cfg, const Dataset& ds);

// Runs one cell outside a grid.
CellResult run_cell(const GridConfig& cfg, const Dataset& ds, const CellKey& key,
                    RunArtifacts* artifacts = nullptr);

struct Table1Row {
  std::size_t hidden;
  double accuracy;
  double precision;
  double recall;
  double f1;
};

// Reported leaky-protocol results of the single-hidden-layer network.
std::span<const Table1Row> table1_reference();

struct Deviation {
  std::size_t hidden = 0;
  std::string metric;
  double reference = 0.0;
  std::optional<double> observed;
  std::optional<double> deviation;
  bool flagged = false;
};

inline constexpr double kTable1Tolerance = 0.02;

// |median(leaky cells) - reference| per (N, metric). Throws leakbench::Error
// listing the N values that have no leaky cells.
std::vector<Deviation> compare_to_table1(const GridReport& report,
                                         std::span<const Table1Row> reference,
                                         double tolerance = kTable1Tolerance);
std::vector<Deviation> compare_to_table1(const GridReport& report);

}  // namespace leakbench

#endif  // LEAKBENCH_EXPERIMENT_H_
