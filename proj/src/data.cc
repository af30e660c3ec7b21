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

#include "leakbench/data.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "leakbench/common.h"
#include "leakbench/rng.h"

namespace leakbench {
namespace {

constexpr double kTwoDaysSeconds = 172800.0;

// Splits one CSV record, honoring double-quoted fields with "" escapes.
std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

double parse_number(const std::string& cell, std::size_t line_no,
                    const std::string& column) {
  const std::string text = trim(cell);
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (!text.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw Error("load_csv: row " + std::to_string(line_no) + ", column '" +
                column + "': not a number: '" + cell + "'");
  }
  return value;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::size_t Dataset::count_label(int label) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

void Dataset::validate() const {
  if (features.rows() != labels.size()) {
    throw Error("Dataset: feature rows != label count");
  }
  if (row_origin.size() != labels.size()) {
    throw Error("Dataset: row_origin size != label count");
  }
  if (feature_names.size() != features.cols()) {
    throw Error("Dataset: feature_names size != feature columns");
  }
  for (const int y : labels) {
    if (y != 0 && y != 1) throw Error("Dataset: labels must be 0 or 1");
  }
  if (time && time->size() != labels.size()) {
    throw Error("Dataset: time length != row count");
  }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.feature_names = feature_names;
  out.labels.reserve(indices.size());
  out.row_origin.reserve(indices.size());
  Matrix m(indices.size(), cols());
  if (time) out.time.emplace().reserve(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const std::size_t i = indices[r];
    const auto src = features.row(i);
    std::copy(src.begin(), src.end(), m.row(r).begin());
    out.labels.push_back(labels[i]);
    out.row_origin.push_back(row_origin[i]);
    if (time) out.time->push_back((*time)[i]);
  }
  out.features = std::move(m);
  return out;
}

std::vector<std::string> fraud_schema_header() {
  std::vector<std::string> h{"Time"};
  for (int i = 1; i <= 28; ++i) h.push_back("V" + std::to_string(i));
  h.push_back("Amount");
  h.push_back("Class");
  return h;
}

Dataset load_csv(const std::filesystem::path& path, bool expect_schema) {
  std::ifstream in(path);
  if (!in) throw Error("load_csv: cannot open file: " + path.string());

  std::string line;
  if (!std::getline(in, line)) {
    throw Error("load_csv: missing header row: " + path.string());
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  std::vector<std::string> header = split_record(line);
  for (auto& h : header) h = trim(h);

  if (expect_schema && header != fraud_schema_header()) {
    throw Error("load_csv: header does not match Time,V1..V28,Amount,Class: " +
                path.string());
  }
  std::optional<std::size_t> time_col;
  std::optional<std::size_t> class_col;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "Time") time_col = c;
    if (header[c] == "Class") class_col = c;
  }
  if (!class_col) throw Error("load_csv: no 'Class' column: " + path.string());

  Dataset ds;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != time_col && c != class_col) ds.feature_names.push_back(header[c]);
  }
  ds.features = Matrix(0, ds.feature_names.size());
  if (time_col) ds.time.emplace();

  std::vector<double> row(ds.feature_names.size());
  std::vector<double> flat;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_record(line);
    if (cells.size() != header.size()) {
      throw Error("load_csv: row " + std::to_string(line_no) + ": expected " +
                  std::to_string(header.size()) + " columns, got " +
                  std::to_string(cells.size()));
    }
    std::size_t f = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const double v = parse_number(cells[c], line_no, header[c]);
      if (c == class_col) {
        if (v != 0.0 && v != 1.0) {
          throw Error("load_csv: row " + std::to_string(line_no) +
                      ": label outside {0,1}: '" + cells[c] + "'");
        }
        ds.labels.push_back(static_cast<int>(v));
      } else if (c == time_col) {
        ds.time->push_back(v);
      } else {
        row[f++] = v;
      }
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  Matrix m(ds.labels.size(), ds.feature_names.size());
  m.data() = std::move(flat);
  ds.features = std::move(m);
  ds.row_origin.reserve(ds.labels.size());
  for (std::size_t i = 0; i < ds.labels.size(); ++i) {
    ds.row_origin.push_back(RowOrigin::original(i));
  }
  ds.validate();
  return ds;
}

void write_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("write_csv: cannot open for writing: " + path.string());
  std::string line;
  if (ds.time) line += "Time,";
  for (const auto& name : ds.feature_names) line += name + ",";
  line += "Class\n";
  out << line;
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    line.clear();
    if (ds.time) line += format_double((*ds.time)[i]) + ",";
    for (const double v : ds.features.row(i)) line += format_double(v) + ",";
    line += std::to_string(ds.labels[i]);
    line += '\n';
    out << line;
  }
  if (!out) throw Error("write_csv: write failed: " + path.string());
}

void SynthConfig::validate() const {
  if (n_samples == 0) throw Error("SynthConfig: n_samples must be positive");
  if (!(positive_rate > 0.0 && positive_rate <= 0.5)) {
    throw Error("SynthConfig: positive_rate must be in (0, 0.5]");
  }
  if (n_features == 0) throw Error("SynthConfig: n_features must be positive");
  if (!(class_separation > 0.0) || !std::isfinite(class_separation)) {
    throw Error("SynthConfig: class_separation must be positive");
  }
  if (static_cast<double>(n_samples) * positive_rate < 2.0) {
    throw Error("SynthConfig: n_samples * positive_rate must be >= 2");
  }
}

Dataset generate_synthetic(const SynthConfig& cfg) {
  cfg.validate();
  Rng rng(mix_seed({cfg.seed, 0x73796E7468ULL}));
  const std::size_t n = cfg.n_samples;
  const std::size_t d = cfg.n_features;
  const auto n_pos = static_cast<std::size_t>(
      std::llround(static_cast<double>(n) * cfg.positive_rate));

  std::vector<double> times(n);
  for (auto& t : times) t = rng.uniform(0.0, kTwoDaysSeconds);
  std::sort(times.begin(), times.end());

  // Positive rows are drawn from the whole time range, or from the final 20%
  // of rows under fraud_burst.
  std::size_t pool_begin = 0;
  if (cfg.fraud_burst) {
    pool_begin = n - std::max<std::size_t>(n_pos, n / 5);
  }
  std::vector<std::size_t> pool(n - pool_begin);
  std::iota(pool.begin(), pool.end(), pool_begin);
  for (std::size_t i = 0; i < n_pos; ++i) {
    std::swap(pool[i], pool[i + rng.index(pool.size() - i)]);
  }
  std::vector<int> labels(n, 0);
  for (std::size_t i = 0; i < n_pos; ++i) labels[pool[i]] = 1;

  const double shift = cfg.class_separation / std::sqrt(static_cast<double>(d));
  Dataset ds;
  ds.features = Matrix(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = ds.features.row(i);
    const double mean = labels[i] == 1 ? shift : 0.0;
    for (std::size_t j = 0; j < d; ++j) row[j] = mean + rng.normal();
  }
  ds.labels = std::move(labels);
  ds.time = std::move(times);
  for (std::size_t j = 0; j < d; ++j) {
    ds.feature_names.push_back("x" + std::to_string(j + 1));
  }
  ds.row_origin.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ds.row_origin.push_back(RowOrigin::original(i));
  return ds;
}

Dataset expand_features(const Dataset& ds, int degree) {
  if (degree != 1 && degree != 2) {
    throw Error("expand_features: degree must be 1 or 2");
  }
  if (degree == 1) return ds;
  const std::size_t d = ds.cols();
  const std::size_t out_cols = d + d * (d + 1) / 2;
  Dataset out = ds;
  out.features = Matrix(ds.rows(), out_cols);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      out.feature_names.push_back(i == j ? ds.feature_names[i] + "^2"
                                         : ds.feature_names[i] + "*" +
                                               ds.feature_names[j]);
    }
  }
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    const auto src = ds.features.row(r);
    auto dst = out.features.row(r);
    std::copy(src.begin(), src.end(), dst.begin());
    std::size_t c = d;
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i; j < d; ++j) dst[c++] = src[i] * src[j];
    }
  }
  return out;
}

Dataset select_columns(const Dataset& ds, std::span<const std::string> names) {
  std::vector<std::ptrdiff_t> source;  // -1 selects the time column
  for (const auto& name : names) {
    if (name == "Time" && ds.time) {
      source.push_back(-1);
      continue;
    }
    const auto it = std::find(ds.feature_names.begin(), ds.feature_names.end(), name);
    if (it == ds.feature_names.end()) {
      throw Error("select_columns: unknown column '" + name + "'");
    }
    source.push_back(it - ds.feature_names.begin());
  }
  Dataset out = ds;
  out.feature_names.assign(names.begin(), names.end());
  out.features = Matrix(ds.rows(), source.size());
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    auto dst = out.features.row(r);
    for (std::size_t c = 0; c < source.size(); ++c) {
      dst[c] = source[c] < 0 ? (*ds.time)[r]
                             : ds.features(r, static_cast<std::size_t>(source[c]));
    }
  }
  return out;
}

}  // namespace leakbench
