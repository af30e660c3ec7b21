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

#include "leakbench/pipeline.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <unordered_set>

#include "leakbench/common.h"
#include "leakbench/rng.h"

namespace leakbench {
namespace {

constexpr std::uint64_t kStreamSplit = 0x73706C6974ULL;
// Recall exceeding precision by more than this is reported.
constexpr double kRecallGapFinding = 0.2;

std::size_t rounded_share(std::size_t count, double fraction) {
  return static_cast<std::size_t>(std::llround(static_cast<double>(count) * fraction));
}

// Canonical text of a feature row at 12 significant digits; -0 folds into 0.
std::string row_key(std::span<const double> row) {
  std::string key;
  char buf[32];
  for (const double v : row) {
    std::snprintf(buf, sizeof(buf), "%.11e,", v == 0.0 ? 0.0 : v);
    key += buf;
  }
  return key;
}

std::string fmt4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace

std::string_view to_string(SplitStrategy s) {
  switch (s) {
    case SplitStrategy::kRandom: return "random";
    case SplitStrategy::kStratified: return "stratified";
    case SplitStrategy::kTemporal: return "temporal";
  }
  return "unknown";
}

SplitStrategy split_strategy_from_string(std::string_view name) {
  for (const auto s : {SplitStrategy::kRandom, SplitStrategy::kStratified,
                       SplitStrategy::kTemporal}) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown split strategy: '" + std::string(name) + "'");
}

std::string_view to_string(ScalerMethod m) {
  switch (m) {
    case ScalerMethod::kNone: return "none";
    case ScalerMethod::kStandardize: return "standardize";
    case ScalerMethod::kMinMax: return "minmax";
  }
  return "unknown";
}

ScalerMethod scaler_method_from_string(std::string_view name) {
  for (const auto m : {ScalerMethod::kNone, ScalerMethod::kStandardize,
                       ScalerMethod::kMinMax}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("unknown scaler method: '" + std::string(name) + "'");
}

std::string_view to_string(FitScope s) {
  return s == FitScope::kFullDataset ? "full_dataset" : "train_only";
}

std::string_view to_string(Ordering o) { return o == Ordering::kLeaky ? "leaky" : "clean"; }

Ordering ordering_from_string(std::string_view name) {
  if (name == "leaky") return Ordering::kLeaky;
  if (name == "clean") return Ordering::kClean;
  throw ConfigError("unknown protocol: '" + std::string(name) + "'");
}

SplitIndices split(const Dataset& ds, const SplitSpec& spec) {
  if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0)) {
    throw Error("split: test_fraction must be in (0, 1)");
  }
  const std::size_t n = ds.rows();
  if (n < 2) throw Error("split: need at least two rows");

  SplitIndices out;
  Rng rng(mix_seed({spec.seed, kStreamSplit}));
  std::vector<bool> in_test(n, false);
  switch (spec.strategy) {
    case SplitStrategy::kRandom: {
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), 0);
      rng.shuffle(std::span<std::size_t>(order));
      const std::size_t n_test = std::clamp<std::size_t>(
          rounded_share(n, spec.test_fraction), 1, n - 1);
      for (std::size_t i = 0; i < n_test; ++i) in_test[order[i]] = true;
      break;
    }
    case SplitStrategy::kStratified: {
      for (const int label : {0, 1}) {
        std::vector<std::size_t> cls;
        for (std::size_t i = 0; i < n; ++i) {
          if (ds.labels[i] == label) cls.push_back(i);
        }
        rng.shuffle(std::span<std::size_t>(cls));
        std::size_t n_test = rounded_share(cls.size(), spec.test_fraction);
        if (label == 1 && !cls.empty() && n_test == 0) n_test = 1;
        for (std::size_t i = 0; i < n_test; ++i) in_test[cls[i]] = true;
      }
      break;
    }
    case SplitStrategy::kTemporal: {
      if (!ds.time) throw Error("split: temporal strategy requires a time column");
      const auto& t = *ds.time;
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return t[a] < t[b]; });
      std::size_t n_train = n - std::clamp<std::size_t>(
                                    rounded_share(n, spec.test_fraction), 1, n - 1);
      while (n_train < n && t[order[n_train]] == t[order[n_train - 1]]) ++n_train;
      for (std::size_t i = n_train; i < n; ++i) in_test[order[i]] = true;
      break;
    }
  }
  for (std::size_t i = 0; i < n; ++i) (in_test[i] ? out.test : out.train).push_back(i);
  if (out.test.empty()) throw Error("split: test set is empty");
  if (out.train.empty()) throw Error("split: training set is empty");
  return out;
}

ScalerParams fit_scaler(const Dataset& ds, std::span<const std::size_t> rows,
                        ScalerMethod method, std::span<const std::string> columns) {
  if (rows.empty()) throw Error("fit_scaler: empty fit set");
  const std::size_t d = ds.cols();
  ScalerParams p;
  p.method = method;
  p.offset.assign(d, 0.0);
  p.scale.assign(d, 1.0);
  p.constant.assign(d, false);
  p.selected.assign(d, columns.empty());
  for (const auto& name : columns) {
    const auto it = std::find(ds.feature_names.begin(), ds.feature_names.end(), name);
    if (it == ds.feature_names.end()) {
      throw Error("fit_scaler: unknown column '" + name + "'");
    }
    p.selected[static_cast<std::size_t>(it - ds.feature_names.begin())] = true;
  }
  p.fitted_on = rows.size() == ds.rows() ? FitScope::kFullDataset : FitScope::kTrainOnly;
  if (method == ScalerMethod::kNone) return p;

  const double count = static_cast<double>(rows.size());
  for (std::size_t c = 0; c < d; ++c) {
    if (!p.selected[c]) continue;
    if (method == ScalerMethod::kStandardize) {
      double sum = 0.0;
      for (const std::size_t r : rows) sum += ds.features(r, c);
      const double mean = sum / count;
      double sq = 0.0;
      for (const std::size_t r : rows) {
        const double dev = ds.features(r, c) - mean;
        sq += dev * dev;
      }
      const double sd = std::sqrt(sq / count);
      p.offset[c] = mean;
      p.scale[c] = sd;
      p.constant[c] = !(sd > 0.0);
    } else {
      double lo = ds.features(rows[0], c);
      double hi = lo;
      for (const std::size_t r : rows) {
        lo = std::min(lo, ds.features(r, c));
        hi = std::max(hi, ds.features(r, c));
      }
      p.offset[c] = lo;
      p.scale[c] = hi - lo;
      p.constant[c] = !(hi > lo);
    }
  }
  return p;
}

Dataset apply_scaler(const Dataset& ds, const ScalerParams& params) {
  if (params.method == ScalerMethod::kNone) return ds;
  if (params.offset.size() != ds.cols()) {
    throw Error("apply_scaler: parameter width does not match the dataset");
  }
  Dataset out = ds;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.features.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (!params.selected[c] || params.constant[c]) continue;
      row[c] = (row[c] - params.offset[c]) / params.scale[c];
    }
  }
  return out;
}

ContaminationReport contamination_audit(const Dataset& train, const Dataset& test) {
  ContaminationReport rep;
  rep.n_test_rows = test.rows();
  std::unordered_set<std::size_t> train_sources;
  std::unordered_set<std::string> train_keys;
  for (std::size_t i = 0; i < train.rows(); ++i) {
    if (!train.row_origin[i].is_synthetic()) train_sources.insert(train.row_origin[i].source);
    train_keys.insert(row_key(train.features.row(i)));
  }
  for (std::size_t i = 0; i < test.rows(); ++i) {
    const RowOrigin& o = test.row_origin[i];
    if (o.is_synthetic()) {
      ++rep.n_synthetic_in_test;
      if (train_sources.contains(o.parent_a) || train_sources.contains(o.parent_b)) {
        ++rep.n_synthetic_in_test_with_parent_in_train;
      }
    }
    if (train_keys.contains(row_key(test.features.row(i)))) {
      ++rep.n_exact_duplicates_across_split;
    }
  }
  rep.leak_flag = rep.n_synthetic_in_test > 0 || rep.n_exact_duplicates_across_split > 0;
  return rep;
}

std::vector<std::string> audit_findings(const Dataset& ds, const ProtocolSpec& proto,
                                        const MetricReport& eval,
                                        const ContaminationReport& contamination) {
  std::vector<std::string> findings;
  if (contamination.leak_flag) {
    findings.push_back("data_leakage: " + std::to_string(contamination.n_synthetic_in_test) +
                       " synthetic and " +
                       std::to_string(contamination.n_exact_duplicates_across_split) +
                       " duplicated rows of " + std::to_string(contamination.n_test_rows) +
                       " test rows");
  }
  if (ds.time && proto.split.strategy != SplitStrategy::kTemporal) {
    findings.push_back(
        "temporal_validation: timestamped transactions evaluated with a " +
        std::string(to_string(proto.split.strategy)) + " split");
  }
  const auto& s = eval.scalars;
  if (s.recall && s.precision && *s.recall - *s.precision > kRecallGapFinding) {
    findings.push_back("recall_overemphasis: recall " + fmt4(*s.recall) +
                       " exceeds precision " + fmt4(*s.precision));
  }
  return findings;
}

RunArtifacts run_protocol(const Dataset& ds, const ProtocolSpec& proto,
                          const MlpConfig& model_cfg, ProtocolObserver* observer) {
  if (ds.count_label(0) == 0 || ds.count_label(1) == 0) {
    throw Error("run_protocol: dataset must contain both classes");
  }
  ProtocolObserver null_observer;
  ProtocolObserver& obs = observer ? *observer : null_observer;

  RunArtifacts art;
  Dataset train_set;
  Dataset test_set;
  if (proto.ordering == Ordering::kLeaky) {
    std::vector<std::size_t> all(ds.rows());
    std::iota(all.begin(), all.end(), 0);
    Dataset scaled = ds;
    if (proto.scaler != ScalerMethod::kNone) {
      obs.on_scaler_fit(ds, all);
      art.scaler = fit_scaler(ds, all, proto.scaler, proto.scale_columns);
      scaled = apply_scaler(ds, art.scaler);
    }
    obs.on_resample(scaled);
    ResampleResult rr = resample(scaled, proto.resampler);
    art.n_synthetic = rr.n_synthetic;
    art.n_removed = rr.n_removed;
    art.resample_warnings = std::move(rr.warnings);
    const SplitIndices idx = split(rr.dataset, proto.split);
    train_set = rr.dataset.subset(idx.train);
    test_set = rr.dataset.subset(idx.test);
  } else {
    const SplitIndices idx = split(ds, proto.split);
    Dataset scaled = ds;
    if (proto.scaler != ScalerMethod::kNone) {
      obs.on_scaler_fit(ds, idx.train);
      art.scaler = fit_scaler(ds, idx.train, proto.scaler, proto.scale_columns);
      scaled = apply_scaler(ds, art.scaler);
    }
    test_set = scaled.subset(idx.test);
    Dataset raw_train = scaled.subset(idx.train);
    obs.on_resample(raw_train);
    ResampleResult rr = resample(raw_train, proto.resampler);
    art.n_synthetic = rr.n_synthetic;
    art.n_removed = rr.n_removed;
    art.resample_warnings = std::move(rr.warnings);
    train_set = std::move(rr.dataset);
  }

  MlpConfig cfg = model_cfg;
  cfg.n_features = train_set.cols();
  obs.on_train(train_set);
  TrainResult trained = train(init_mlp(cfg), train_set.features, train_set.labels, cfg);
  art.model = std::move(trained.model);
  art.history = std::move(trained.history);
  art.n_train = train_set.rows();

  const std::vector<double> scores = forward(art.model, test_set.features);
  art.eval = evaluate(test_set.labels, scores, cfg.threshold);
  art.contamination = contamination_audit(train_set, test_set);
  art.findings = audit_findings(ds, proto, art.eval, art.contamination);
  return art;
}

}  // namespace leakbench
