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

#ifndef LEAKBENCH_PIPELINE_H_
#define LEAKBENCH_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "leakbench/data.h"
#include "leakbench/metrics.h"
#include "leakbench/model.h"
#include "leakbench/resample.h"

namespace leakbench {

enum class SplitStrategy { kRandom, kStratified, kTemporal };

std::string_view to_string(SplitStrategy s);
SplitStrategy split_strategy_from_string(std::string_view name);

struct SplitSpec {
  SplitStrategy strategy = SplitStrategy::kStratified;
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
};

struct SplitIndices {
  std::vector<std::size_t> train;  // sorted
  std::vector<std::size_t> test;   // sorted
};

// Random: uniform permutation. Stratified: per-class round(count * fraction)
// test rows, at least one positive when any exist. Temporal: the latest rows
// by time form the test set; rows tied with the last training timestamp stay
// in training.
SplitIndices split(const Dataset& ds, const SplitSpec& spec);

enum class ScalerMethod { kNone, kStandardize, kMinMax };
enum class FitScope { kTrainOnly, kFullDataset };

std::string_view to_string(ScalerMethod m);
ScalerMethod scaler_method_from_string(std::string_view name);
std::string_view to_string(FitScope s);

struct ScalerParams {
  ScalerMethod method = ScalerMethod::kNone;
  // Per column: mean/std for Standardize, min/(max - min) for MinMax.
  std::vector<double> offset;
  std::vector<double> scale;
  // Constant (or unselected) columns pass through unchanged.
  std::vector<bool> constant;
  std::vector<bool> selected;
  FitScope fitted_on = FitScope::kTrainOnly;

  bool operator==(const ScalerParams&) const = default;
};

// Fits on `rows` only. `columns` restricts scaling to the named features
// (empty means all).
ScalerParams fit_scaler(const Dataset& ds, std::span<const std::size_t> rows,
                        ScalerMethod method,
                        std::span<const std::string> columns = {});
Dataset apply_scaler(const Dataset& ds, const ScalerParams& params);

struct ContaminationReport {
  std::size_t n_test_rows = 0;
  std::size_t n_synthetic_in_test = 0;
  std::size_t n_synthetic_in_test_with_parent_in_train = 0;
  std::size_t n_exact_duplicates_across_split = 0;
  bool leak_flag = false;

  bool operator==(const ContaminationReport&) const = default;
};

// Synthetic-row counts come from row provenance; a synthetic test row counts
// as parent-in-train when either interpolation parent appears in training as
// an original row. Duplicates are test rows whose features, rounded to 12
// significant digits, match some training row.
ContaminationReport contamination_audit(const Dataset& train, const Dataset& test);

enum class Ordering { kLeaky, kClean };

std::string_view to_string(Ordering o);
Ordering ordering_from_string(std::string_view name);

struct ProtocolSpec {
  Ordering ordering = Ordering::kClean;
  SplitSpec split;
  ScalerMethod scaler = ScalerMethod::kNone;
  std::vector<std::string> scale_columns;
  ResamplerSpec resampler;
};

// Observes which rows reach each fitting stage. The default implementation
// ignores everything.
class ProtocolObserver {
 public:
  virtual ~ProtocolObserver() = default;
  virtual void on_scaler_fit(const Dataset& /*ds*/, std::span<const std::size_t> /*rows*/) {}
  virtual void on_resample(const Dataset& /*input*/) {}
  virtual void on_train(const Dataset& /*train*/) {}
};

struct RunArtifacts {
  MlpModel model;
  std::vector<double> history;
  MetricReport eval;
  ContaminationReport contamination;
  ScalerParams scaler;
  std::size_t n_train = 0;
  std::size_t n_synthetic = 0;
  std::size_t n_removed = 0;
  std::vector<std::string> resample_warnings;
  std::vector<std::string> findings;
};

// Leaky: fit scaler on everything, resample everything, then split, train and
// evaluate on the contaminated test split. Clean: split first, fit the scaler
// on train rows, resample train only, evaluate on the untouched test split.
// model_cfg.n_features is taken from the data.
RunArtifacts run_protocol(const Dataset& ds, const ProtocolSpec& proto,
                          const MlpConfig& model_cfg,
                          ProtocolObserver* observer = nullptr);

// Methodology findings for a finished run: leakage, missing temporal
// validation on timestamped data, and recall far above precision.
std::vector<std::string> audit_findings(const Dataset& ds, const ProtocolSpec& proto,
                                        const MetricReport& eval,
                                        const ContaminationReport& contamination);

}  // namespace leakbench

#endif  // LEAKBENCH_PIPELINE_H_
