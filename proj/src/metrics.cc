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

#include "leakbench/metrics.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "leakbench/common.h"

namespace leakbench {
namespace {

Metric ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

// Cumulative (fp, tp) counts after each group of equal scores, descending.
struct Step {
  std::uint64_t fp;
  std::uint64_t tp;
};

std::vector<Step> threshold_steps(std::span<const int> labels,
                                  std::span<const double> scores) {
  if (labels.size() != scores.size()) {
    throw Error("curve: labels and scores differ in length");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<Step> steps;
  Step cur{0, 0};
  for (std::size_t i = 0; i < order.size(); ++i) {
    const int y = labels[order[i]];
    if (y != 0 && y != 1) throw Error("curve: labels must be 0 or 1");
    (y == 1 ? cur.tp : cur.fp) += 1;
    if (i + 1 == order.size() || scores[order[i + 1]] != scores[order[i]]) {
      steps.push_back(cur);
    }
  }
  return steps;
}

}  // namespace

ConfusionMatrix confusion(std::span<const int> labels, std::span<const int> predictions) {
  if (labels.size() != predictions.size()) {
    throw Error("confusion: " + std::to_string(labels.size()) + " labels vs " +
                std::to_string(predictions.size()) + " predictions");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int y = labels[i];
    const int p = predictions[i];
    if ((y != 0 && y != 1) || (p != 0 && p != 1)) {
      throw Error("confusion: values must be 0 or 1");
    }
    if (y == 1) {
      (p == 1 ? cm.tp : cm.fn) += 1;
    } else {
      (p == 1 ? cm.fp : cm.tn) += 1;
    }
  }
  return cm;
}

ScalarMetrics compute_metrics(const ConfusionMatrix& cm) {
  ScalarMetrics m;
  m.accuracy = ratio(cm.tp + cm.tn, cm.total());
  m.precision = ratio(cm.tp, cm.tp + cm.fp);
  m.recall = ratio(cm.tp, cm.tp + cm.fn);
  m.specificity = ratio(cm.tn, cm.tn + cm.fp);
  if (m.precision && m.recall && *m.precision + *m.recall > 0.0) {
    m.f1 = 2.0 * (*m.precision * *m.recall) / (*m.precision + *m.recall);
  }
  return m;
}

RocCurve roc_curve(std::span<const int> labels, std::span<const double> scores) {
  const auto steps = threshold_steps(labels, scores);
  const std::uint64_t pos = steps.empty() ? 0 : steps.back().tp;
  const std::uint64_t neg = steps.empty() ? 0 : steps.back().fp;
  if (pos == 0 || neg == 0) {
    throw Error("roc_curve: both classes must be present");
  }
  RocCurve roc;
  roc.points.push_back({0.0, 0.0});
  // Twice the area in units of (1/neg) x (1/pos); exact integer arithmetic.
  unsigned __int128 doubled_area = 0;
  Step prev{0, 0};
  for (const Step& s : steps) {
    doubled_area += static_cast<unsigned __int128>(s.fp - prev.fp) * (s.tp + prev.tp);
    roc.points.push_back({static_cast<double>(s.fp) / static_cast<double>(neg),
                          static_cast<double>(s.tp) / static_cast<double>(pos)});
    prev = s;
  }
  roc.auc = static_cast<double>(static_cast<long double>(doubled_area) /
                                (2.0L * static_cast<long double>(pos) *
                                 static_cast<long double>(neg)));
  return roc;
}

PrCurve pr_curve(std::span<const int> labels, std::span<const double> scores) {
  const auto steps = threshold_steps(labels, scores);
  const std::uint64_t pos = steps.empty() ? 0 : steps.back().tp;
  if (pos == 0) throw Error("pr_curve: no positive labels");
  PrCurve prc;
  prc.points.push_back({0.0, 1.0});
  double prev_recall = 0.0;
  for (const Step& s : steps) {
    const double recall = static_cast<double>(s.tp) / static_cast<double>(pos);
    const double precision =
        static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fp);
    prc.average_precision += (recall - prev_recall) * precision;
    prc.points.push_back({recall, precision});
    prev_recall = recall;
  }
  return prc;
}

MetricReport evaluate(std::span<const int> labels, std::span<const double> scores,
                      double threshold) {
  std::vector<int> predicted(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    predicted[i] = scores[i] >= threshold ? 1 : 0;
  }
  MetricReport report;
  report.confusion = confusion(labels, predicted);
  report.scalars = compute_metrics(report.confusion);
  const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  if (positives > 0) report.prc = pr_curve(labels, scores);
  if (positives > 0 && positives < labels.size()) report.roc = roc_curve(labels, scores);
  return report;
}

}  // namespace leakbench
