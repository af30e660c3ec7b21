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

#ifndef LEAKBENCH_DATA_H_
#define LEAKBENCH_DATA_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "leakbench/matrix.h"

namespace leakbench {

// Where a row came from. Indices refer to the rows of the dataset as it was
// loaded or generated ("root" indices), so provenance survives subsetting and
// repeated resampling.
struct RowOrigin {
  enum class Kind { kOriginal, kSynthetic };

  Kind kind = Kind::kOriginal;
  // Root index for original rows.
  std::size_t source = 0;
  // Interpolation parents for synthetic rows: x_a + delta * (x_b - x_a).
  std::size_t parent_a = 0;
  std::size_t parent_b = 0;
  double delta = 0.0;

  static RowOrigin original(std::size_t source) {
    return {Kind::kOriginal, source, 0, 0, 0.0};
  }
  static RowOrigin synthetic(std::size_t a, std::size_t b, double delta) {
    return {Kind::kSynthetic, 0, a, b, delta};
  }

  bool is_synthetic() const { return kind == Kind::kSynthetic; }
  // Root index that best identifies this row: the source for originals,
  // parent_a for synthetic rows.
  std::size_t anchor() const { return is_synthetic() ? parent_a : source; }

  bool operator==(const RowOrigin&) const = default;
};

struct Dataset {
  Matrix features;
  std::vector<int> labels;
  std::optional<std::vector<double>> time;
  std::vector<std::string> feature_names;
  std::vector<RowOrigin> row_origin;

  std::size_t rows() const { return labels.size(); }
  std::size_t cols() const { return features.cols(); }
  std::size_t count_label(int label) const;

  // Throws leakbench::Error when a structural invariant is broken.
  void validate() const;

  // Rows in the given order, provenance preserved.
  Dataset subset(std::span<const std::size_t> indices) const;

  bool operator==(const Dataset&) const = default;
};

// Column header of the public credit-card fraud file.
std::vector<std::string> fraud_schema_header();

// Reads a CSV with a header row. With expect_schema the header must be exactly
// Time,V1..V28,Amount,Class. Otherwise a "Class" column is required, a "Time"
// column is optional, and every other column becomes a feature.
Dataset load_csv(const std::filesystem::path& path, bool expect_schema);

// Writes Time (when present), the features and Class with round-trip
// precision.
void write_csv(const Dataset& ds, const std::filesystem::path& path);

struct SynthConfig {
  std::size_t n_samples = 20000;
  double positive_rate = 0.005;
  std::size_t n_features = 30;
  double class_separation = 2.0;
  std::uint64_t seed = 0;
  // Concentrates positives in the final 20% of the time range.
  bool fraud_burst = false;

  void validate() const;
};

// Two identity-covariance Gaussian clusters whose means are class_separation
// apart, rows ordered by a uniform time draw over two days.
Dataset generate_synthetic(const SynthConfig& cfg);

// degree 1 is the identity; degree 2 appends every product x_i * x_j, i <= j.
Dataset expand_features(const Dataset& ds, int degree);

// Keeps the named feature columns in the given order. "Time" may be named to
// use the time column as a model input.
Dataset select_columns(const Dataset& ds, std::span<const std::string> names);

}  // namespace leakbench

#endif  // LEAKBENCH_DATA_H_
