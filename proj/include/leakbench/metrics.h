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

#ifndef LEAKBENCH_METRICS_H_
#define LEAKBENCH_METRICS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace leakbench {

struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + tn + fp + fn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

// A metric whose denominator is zero has no value (never silently 0).
using Metric = std::optional<double>;

struct ScalarMetrics {
  Metric accuracy;
  Metric precision;
  Metric recall;
  Metric specificity;
  Metric f1;

  bool operator==(const ScalarMetrics&) const = default;
};

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const CurvePoint&) const = default;
};

// Points are (false positive rate, true positive rate), from (0,0) to (1,1).
struct RocCurve {
  std::vector<CurvePoint> points;
  double auc = 0.0;
  bool operator==(const RocCurve&) const = default;
};

// Points are (recall, precision), led by the (0, 1) sentinel.
struct PrCurve {
  std::vector<CurvePoint> points;
  double average_precision = 0.0;
  bool operator==(const PrCurve&) const = default;
};

struct MetricReport {
  ConfusionMatrix confusion;
  ScalarMetrics scalars;
  // Absent when the evaluated labels lack one class.
  std::optional<RocCurve> roc;
  std::optional<PrCurve> prc;

  bool operator==(const MetricReport&) const = default;
};

// Throws leakbench::Error on a length mismatch or a value outside {0,1}.
ConfusionMatrix confusion(std::span<const int> labels, std::span<const int> predictions);

ScalarMetrics compute_metrics(const ConfusionMatrix& cm);

// Threshold sweep over distinct scores, descending; equal scores form one
// step. AUC by the trapezoidal rule. Throws unless both classes are present.
RocCurve roc_curve(std::span<const int> labels, std::span<const double> scores);

// One point per distinct score threshold. AP is the step sum
// sum_n (R_n - R_{n-1}) * P_n. Throws when there are no positives.
PrCurve pr_curve(std::span<const int> labels, std::span<const double> scores);

// Confusion matrix at `threshold` (score >= threshold is positive), scalar
// metrics, and whichever curves are defined.
MetricReport evaluate(std::span<const int> labels, std::span<const double> scores,
                      double threshold);

}  // namespace leakbench

#endif  // LEAKBENCH_METRICS_H_
