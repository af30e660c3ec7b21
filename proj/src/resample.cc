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

#include "leakbench/resample.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "leakbench/common.h"
#include "leakbench/kernels.h"
#include "leakbench/kmeans.h"
#include "leakbench/neighbors.h"
#include "leakbench/rng.h"

namespace leakbench {
namespace {

constexpr std::uint64_t kStreamSmote = 0x736D6F7465ULL;
constexpr std::uint64_t kStreamOver = 0x6F766572ULL;
constexpr std::uint64_t kStreamUnder = 0x756E646572ULL;
constexpr std::uint64_t kStreamCentroids = 0x63656E74ULL;

std::vector<std::size_t> rows_with_label(const Dataset& ds, int label) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    if (ds.labels[i] == label) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> all_rows(const Dataset& ds) {
  std::vector<std::size_t> out(ds.rows());
  std::iota(out.begin(), out.end(), 0);
  return out;
}

void require_subquadratic(const Dataset& ds, const ResamplerSpec& spec,
                          std::string_view method) {
  if (!spec.allow_quadratic && ds.rows() > kQuadraticRowLimit) {
    throw Error(std::string(method) + ": " + std::to_string(ds.rows()) +
                " rows exceeds the all-pairs limit of " +
                std::to_string(kQuadraticRowLimit) +
                "; pass --allow-quadratic to run it anyway");
  }
}

std::size_t oversample_target(std::size_t minority, std::size_t majority,
                              double ratio) {
  const auto wanted = static_cast<std::size_t>(
      std::llround(ratio * static_cast<double>(majority)));
  return wanted > minority ? wanted - minority : 0;
}

std::size_t undersample_target(std::size_t minority, double ratio) {
  return static_cast<std::size_t>(
      std::llround(static_cast<double>(minority) / ratio));
}

// Appends generated rows to a copy of the input.
class Augmenter {
 public:
  Augmenter(const Dataset& input, std::size_t expected_new) : input_(input) {
    result_.dataset = input;
    result_.dataset.features.reserve_rows(input.rows() + expected_new);
  }

  void add_interpolated(std::size_t a, std::size_t b, double delta, int label) {
    std::vector<double> row(input_.cols());
    interpolate(input_.features.row(a), input_.features.row(b), delta, row);
    append(row, a, b, delta, label, true);
  }

  void add_copy(std::size_t source, int label) {
    const auto src = input_.features.row(source);
    append({src.begin(), src.end()}, source, source, 0.0, label, true);
  }

  ResampleResult finish() && {
    result_.n_synthetic = result_.provenance.size();
    return std::move(result_);
  }

 private:
  void append(const std::vector<double>& row, std::size_t a, std::size_t b,
              double delta, int label, bool interpolated) {
    Dataset& out = result_.dataset;
    result_.provenance.push_back({out.rows(), a, b, delta, interpolated});
    out.features.append_row(row);
    out.labels.push_back(label);
    if (out.time) {
      const double ta = (*input_.time)[a];
      const double tb = (*input_.time)[b];
      out.time->push_back(ta + delta * (tb - ta));
    }
    out.row_origin.push_back(RowOrigin::synthetic(
        input_.row_origin[a].anchor(), input_.row_origin[b].anchor(), delta));
  }

  const Dataset& input_;
  ResampleResult result_;
};

// Keeps the input rows flagged in `keep`, in input order.
ResampleResult keep_rows(const Dataset& ds, const std::vector<bool>& keep) {
  ResampleResult result;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    (keep[i] ? kept : result.removed_indices).push_back(i);
  }
  result.dataset = ds.subset(kept);
  result.n_removed = result.removed_indices.size();
  return result;
}

struct ClassSplit {
  int minority_label;
  int majority_label;
  std::vector<std::size_t> minority;
  std::vector<std::size_t> majority;
};

ClassSplit split_classes(const Dataset& ds) {
  ClassSplit s;
  s.minority_label = minority_label(ds);
  s.majority_label = 1 - s.minority_label;
  s.minority = rows_with_label(ds, s.minority_label);
  s.majority = rows_with_label(ds, s.majority_label);
  return s;
}

// Minority-to-minority k-NN table, indexed parallel to `minority`.
std::vector<std::vector<std::size_t>> minority_neighbors(
    const Dataset& ds, const std::vector<std::size_t>& minority, std::size_t k) {
  return nearest_neighbors_of_rows(ds.features, minority, minority, k);
}

void require_minority_above(const ClassSplit& s, std::size_t bound,
                            std::string_view method, std::string_view what) {
  if (s.minority.size() <= bound) {
    throw Error(std::string(method) + ": minority count (" +
                std::to_string(s.minority.size()) + ") must exceed " +
                std::string(what) + " (" + std::to_string(bound) + ")");
  }
}

// One SMOTE draw from seed position `pos` in `minority`: delta is drawn
// before the neighbor, the neighbor uniformly among the k nearest.
void smote_draw(Augmenter& aug, const ClassSplit& s,
                const std::vector<std::vector<std::size_t>>& neighbors,
                std::size_t pos, Rng& rng) {
  const double delta = rng.uniform();
  const auto& nn = neighbors[pos];
  const std::size_t partner = nn[rng.index(nn.size())];
  aug.add_interpolated(s.minority[pos], partner, delta, s.minority_label);
}

ResampleResult smote_with_split(const Dataset& ds, const ResamplerSpec& spec,
                                const ClassSplit& s) {
  require_minority_above(s, spec.k_neighbors, "smote", "k_neighbors");
  const std::size_t n_new =
      oversample_target(s.minority.size(), s.majority.size(), spec.target_ratio);
  const auto neighbors = minority_neighbors(ds, s.minority, spec.k_neighbors);
  Rng rng(mix_seed({spec.seed, kStreamSmote}));
  Augmenter aug(ds, n_new);
  for (std::size_t i = 0; i < n_new; ++i) {
    smote_draw(aug, s, neighbors, rng.index(s.minority.size()), rng);
  }
  return std::move(aug).finish();
}

std::vector<std::size_t> tomek_removals(const Dataset& ds, int majority_label) {
  const auto rows = all_rows(ds);
  const auto nn = nearest_neighbors_of_rows(ds.features, rows, rows, 1);
  std::vector<std::size_t> removed;
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    if (nn[i].empty()) continue;
    const std::size_t j = nn[i][0];
    if (ds.labels[i] == ds.labels[j]) continue;
    if (nn[j].empty() || nn[j][0] != i) continue;
    if (ds.labels[i] == majority_label) removed.push_back(i);
  }
  return removed;
}

ResampleResult tomek_with_majority(const Dataset& ds, const ResamplerSpec& spec,
                                   int majority_label) {
  require_subquadratic(ds, spec, "tomek_links");
  const auto removed = tomek_removals(ds, majority_label);
  std::vector<bool> keep(ds.rows(), true);
  for (const std::size_t i : removed) keep[i] = false;
  return keep_rows(ds, keep);
}

// SMOTE followed by a cleaning stage that only removes rows.
ResampleResult combine(const Dataset& ds, ResampleResult smoted,
                       ResampleResult cleaned) {
  ResampleResult out;
  const std::size_t n_input = ds.rows();
  const std::size_t n_mid = smoted.dataset.rows();
  std::vector<std::int64_t> new_position(n_mid, -1);
  {
    std::vector<bool> removed(n_mid, false);
    for (const std::size_t r : cleaned.removed_indices) removed[r] = true;
    std::int64_t next = 0;
    for (std::size_t r = 0; r < n_mid; ++r) {
      if (!removed[r]) new_position[r] = next++;
    }
  }
  for (const SyntheticRecord& rec : smoted.provenance) {
    if (new_position[rec.output_row] < 0) continue;
    SyntheticRecord kept = rec;
    kept.output_row = static_cast<std::size_t>(new_position[rec.output_row]);
    out.provenance.push_back(kept);
  }
  out.intermediate_to_input.resize(n_mid);
  for (std::size_t r = 0; r < n_mid; ++r) {
    out.intermediate_to_input[r] =
        r < n_input ? static_cast<std::int64_t>(r) : std::int64_t{-1};
  }
  out.dataset = std::move(cleaned.dataset);
  out.removed_indices = std::move(cleaned.removed_indices);
  out.n_removed = out.removed_indices.size();
  out.n_synthetic = out.provenance.size();
  out.warnings = std::move(smoted.warnings);
  out.warnings.insert(out.warnings.end(), cleaned.warnings.begin(),
                      cleaned.warnings.end());
  return out;
}

}  // namespace

std::string_view to_string(ResampleMethod method) {
  switch (method) {
    case ResampleMethod::kNone: return "none";
    case ResampleMethod::kRandomOver: return "random_over";
    case ResampleMethod::kSmote: return "smote";
    case ResampleMethod::kAdasyn: return "adasyn";
    case ResampleMethod::kBorderlineSmote: return "borderline_smote";
    case ResampleMethod::kRandomUnder: return "random_under";
    case ResampleMethod::kNearMiss1: return "nearmiss1";
    case ResampleMethod::kTomekLinks: return "tomek_links";
    case ResampleMethod::kClusterCentroids: return "cluster_centroids";
    case ResampleMethod::kEnn: return "enn";
    case ResampleMethod::kSmoteTomek: return "smote_tomek";
    case ResampleMethod::kSmoteEnn: return "smote_enn";
  }
  return "unknown";
}

ResampleMethod resample_method_from_string(std::string_view name) {
  for (int m = 0; m <= static_cast<int>(ResampleMethod::kSmoteEnn); ++m) {
    const auto method = static_cast<ResampleMethod>(m);
    if (to_string(method) == name) return method;
  }
  throw ConfigError("unknown resampling method: '" + std::string(name) + "'");
}

void ResamplerSpec::validate() const {
  if (k_neighbors < 1) throw Error("ResamplerSpec: k_neighbors must be >= 1");
  if (m_neighbors < 1) throw Error("ResamplerSpec: m_neighbors must be >= 1");
  if (!(target_ratio > 0.0 && target_ratio <= 1.0)) {
    throw Error("ResamplerSpec: target_ratio must be in (0, 1]");
  }
}

void interpolate(std::span<const double> a, std::span<const double> b, double delta,
                 std::span<double> out) {
  for (std::size_t j = 0; j < a.size(); ++j) {
    out[j] = a[j] + delta * (b[j] - a[j]);
  }
}

std::vector<std::size_t> apportion(std::span<const double> weights,
                                   std::size_t total) {
  std::vector<std::size_t> parts(weights.size(), 0);
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(sum > 0.0) || total == 0) return parts;
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double share = weights[i] / sum * static_cast<double>(total);
    parts[i] = static_cast<std::size_t>(std::floor(share));
    assigned += parts[i];
    remainders.emplace_back(share - std::floor(share), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });
  for (std::size_t r = 0; assigned < total && r < remainders.size(); ++r) {
    if (weights[remainders[r].second] > 0.0) {
      ++parts[remainders[r].second];
      ++assigned;
    }
  }
  return parts;
}

int minority_label(const Dataset& ds) {
  return ds.count_label(1) <= ds.count_label(0) ? 1 : 0;
}

BorderlineSets classify_borderline(const Dataset& ds, int minority,
                                   std::size_t m_neighbors) {
  BorderlineSets sets;
  const auto rows = all_rows(ds);
  const auto minority_rows = rows_with_label(ds, minority);
  const auto nn = nearest_neighbors_of_rows(ds.features, minority_rows, rows,
                                            m_neighbors);
  for (std::size_t p = 0; p < minority_rows.size(); ++p) {
    const std::size_t m = nn[p].size();
    const auto hostile = static_cast<std::size_t>(std::count_if(
        nn[p].begin(), nn[p].end(),
        [&](std::size_t j) { return ds.labels[j] != minority; }));
    if (m > 0 && hostile == m) {
      sets.noise.push_back(minority_rows[p]);
    } else if (2 * hostile >= m) {
      sets.danger.push_back(minority_rows[p]);
    } else {
      sets.safe.push_back(minority_rows[p]);
    }
  }
  return sets;
}

std::vector<std::size_t> tomek_link_majority_members(const Dataset& ds) {
  return tomek_removals(ds, 1 - minority_label(ds));
}

ResampleResult smote(const Dataset& ds, const ResamplerSpec& spec) {
  spec.validate();
  return smote_with_split(ds, spec, split_classes(ds));
}

ResampleResult random_oversample(const Dataset& ds, const ResamplerSpec& spec) {
  spec.validate();
  const ClassSplit s = split_classes(ds);
  if (s.minority.empty()) throw Error("random_oversample: minority class is empty");
  const std::size_t n_new =
      oversample_target(s.minority.size(), s.majority.size(), spec.target_ratio);
  Rng rng(mix_seed({spec.seed, kStreamOver}));
  Augmenter aug(ds, n_new);
  for (std::size_t i = 0; i < n_new; ++i) {
    aug.add_copy(s.minority[rng.index(s.minority.size())], s.minority_label);
  }
  return std::move(aug).finish();
}

ResampleResult adasyn(const Dataset& ds, const ResamplerSpec& spec) {
  spec.validate();
  const ClassSplit s = split_classes(ds);
  require_minority_above(s, spec.k_neighbors, "adasyn", "k_neighbors");
  const auto rows = all_rows(ds);
  const auto overall =
      nearest_neighbors_of_rows(ds.features, s.minority, rows, spec.k_neighbors);
  std::vector<double> ratio(s.minority.size());
  for (std::size_t p = 0; p < s.minority.size(); ++p) {
    const auto hostile = std::count_if(
        overall[p].begin(), overall[p].end(),
        [&](std::size_t j) { return ds.labels[j] == s.majority_label; });
    ratio[p] = static_cast<double>(hostile) / static_cast<double>(spec.k_neighbors);
  }
  if (std::accumulate(ratio.begin(), ratio.end(), 0.0) == 0.0) {
    ResampleResult r = smote_with_split(ds, spec, s);
    r.fell_back_to_smote = true;
    r.warnings.push_back(
        "adasyn: no minority row has majority neighbors; fell back to SMOTE");
    return r;
  }
  const std::size_t n_new =
      oversample_target(s.minority.size(), s.majority.size(), spec.target_ratio);
  const auto allocation = apportion(ratio, n_new);
  const auto neighbors = minority_neighbors(ds, s.minority, spec.k_neighbors);
  Rng rng(mix_seed({spec.seed, kStreamSmote}));
  Augmenter aug(ds, n_new);
  for (std::size_t p = 0; p < s.minority.size(); ++p) {
    for (std::size_t g = 0; g < allocation[p]; ++g) smote_draw(aug, s, neighbors, p, rng);
  }
  return std::move(aug).finish();
}

ResampleResult borderline_smote(const Dataset& ds, const ResamplerSpec& spec) {
  spec.validate();
  const ClassSplit s = split_classes(ds);
  require_minority_above(s, std::max(spec.k_neighbors, spec.m_neighbors),
                         "borderline_smote", "max(k_neighbors, m_neighbors)");
  const BorderlineSets sets = classify_borderline(ds, s.minority_label, spec.m_neighbors);
  if (sets.danger.empty()) {
    ResampleResult r;
    r.dataset = ds;
    r.warnings.push_back("borderline_smote: DANGER set is empty; input unchanged");
    return r;
  }
  std::vector<std::size_t> danger_pos;
  for (const std::size_t row : sets.danger) {
    danger_pos.push_back(static_cast<std::size_t>(
        std::lower_bound(s.minority.begin(), s.minority.end(), row) -
        s.minority.begin()));
  }
  const std::size_t n_new =
      oversample_target(s.minority.size(), s.majority.size(), spec.target_ratio);
  const auto neighbors = minority_neighbors(ds, s.minority, spec.k_neighbors);
  Rng rng(mix_seed({spec.seed, kStreamSmote}));
  Augmenter aug(ds, n_new);
  for (std::size_t i = 0; i < n_new; ++i) {
    smote_draw(aug, s, neighbors, danger_pos[rng.index(danger_pos.size())], rng);
  }
  return std::move(aug).finish();
}

ResampleResult random_undersample(const Dataset& ds, const ResamplerSpec& spec) {
  spec.validate();
  ClassSplit s = split_classes(ds);
  const std::size_t keep_n = undersample_target(s.minority.size(), spec.target_ratio);
  if (keep_n > s.majority.size()) {
    throw Error("random_undersample: target keeps " + std::to_string(keep_n) +
                " majority rows but only " + std::to_string(s.majority.size()) +
                " exist");
  }
  Rng rng(mix_seed({spec.seed, kStreamUnder}));
  for (std::size_t i = 0; i < keep_n; ++i) {
    std::swap(s.majority[i], s.majority[i + rng.index(s.majority.size() - i)]);
  }
  std::vector<bool> keep(ds.rows(), true);
  for (std::size_t i = keep_n; i < s.majority.size(); ++i) keep[s.majority[i]] = false;
  return keep_rows(ds, keep);
}

ResampleResult nearmiss1(const Dataset& ds, const ResamplerSpec& spec) {
  spec.validate();
  require_subquadratic(ds, spec, "nearmiss1");
  const ClassSplit s = split_classes(ds);
  if (s.minority.size() < spec.k_neighbors) {
    throw Error("nearmiss1: minority count (" + std::to_string(s.minority.size()) +
                ") must be at least k_neighbors (" +
                std::to_string(spec.k_neighbors) + ")");
  }
  const std::size_t keep_n = undersample_target(s.minority.size(), spec.target_ratio);
  if (keep_n > s.majority.size()) {
    throw Error("nearmiss1: target keeps " + std::to_string(keep_n) +
                " majority rows but only " + std::to_string(s.majority.size()) +
                " exist");
  }
  std::vector<std::pair<double, std::size_t>> ranked;
  ranked.reserve(s.majority.size());
  for (const std::size_t row : s.majority) {
    const auto nn = nearest_neighbors(ds.features, ds.features.row(row), s.minority,
                                      spec.k_neighbors);
    double total = 0.0;
    for (const std::size_t j : nn) {
      total += std::sqrt(kernels::squared_distance(ds.features.row(row),
                                                   ds.features.row(j)));
    }
    ranked.emplace_back(total / static_cast<double>(nn.size()), row);
  }
  std::sort(ranked.begin(), ranked.end());
  std::vector<bool> keep(ds.rows(), true);
  for (std::size_t i = keep_n; i < ranked.size(); ++i) keep[ranked[i].second] = false;
  return keep_rows(ds, keep);
}

ResampleResult tomek_links(const Dataset& ds, const ResamplerSpec& spec) {
  spec.validate();
  if (ds.count_label(0) == 0 || ds.count_label(1) == 0) {
    throw Error("tomek_links: both classes must be present");
  }
  return tomek_with_majority(ds, spec, 1 - minority_label(ds));
}

ResampleResult cluster_centroids(const Dataset& ds, const ResamplerSpec& spec) {
  spec.validate();
  require_subquadratic(ds, spec, "cluster_centroids");
  const ClassSplit s = split_classes(ds);
  const std::size_t k = undersample_target(s.minority.size(), spec.target_ratio);
  if (k == 0 || k > s.majority.size()) {
    throw Error("cluster_centroids: k = " + std::to_string(k) +
                " is not in [1, majority count = " +
                std::to_string(s.majority.size()) + "]");
  }
  const Dataset majority = ds.subset(s.majority);
  KMeansOptions opt;
  opt.seed = mix_seed({spec.seed, kStreamCentroids});
  const KMeansResult km = kmeans(majority.features, k, opt);

  struct Centroid {
    std::size_t nearest;  // input index
    std::size_t cluster;
  };
  std::vector<Centroid> centroids;
  for (std::size_t c = 0; c < k; ++c) {
    const auto nn = nearest_neighbors(majority.features, km.centroids.row(c),
                                      all_rows(majority), 1);
    centroids.push_back({s.majority[nn.front()], c});
  }
  std::stable_sort(centroids.begin(), centroids.end(),
                   [](const Centroid& a, const Centroid& b) { return a.nearest < b.nearest; });

  ResampleResult result = keep_rows(ds, [&] {
    std::vector<bool> keep(ds.rows(), true);
    for (const std::size_t i : s.majority) keep[i] = false;
    return keep;
  }());
  Dataset& out = result.dataset;
  for (const Centroid& c : centroids) {
    result.provenance.push_back({out.rows(), c.nearest, c.nearest, 0.0, false});
    out.features.append_row(km.centroids.row(c.cluster));
    out.labels.push_back(s.majority_label);
    if (out.time) out.time->push_back((*ds.time)[c.nearest]);
    const std::size_t root = ds.row_origin[c.nearest].anchor();
    out.row_origin.push_back(RowOrigin::synthetic(root, root, 0.0));
  }
  result.n_synthetic = result.provenance.size();
  return result;
}

ResampleResult enn(const Dataset& ds, const ResamplerSpec& spec) {
  spec.validate();
  if (ds.rows() <= 3) throw Error("enn: needs more than 3 rows");
  require_subquadratic(ds, spec, "enn");
  const auto rows = all_rows(ds);
  const auto nn = nearest_neighbors_of_rows(ds.features, rows, rows, 3);
  std::vector<bool> keep(ds.rows(), true);
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    int ones = 0;
    for (const std::size_t j : nn[i]) ones += ds.labels[j];
    const int vote = 2 * ones > static_cast<int>(nn[i].size()) ? 1 : 0;
    if (vote != ds.labels[i]) keep[i] = false;
  }
  return keep_rows(ds, keep);
}

ResampleResult smote_tomek(const Dataset& ds, const ResamplerSpec& spec) {
  spec.validate();
  const int majority = 1 - minority_label(ds);
  ResampleResult smoted = smote(ds, spec);
  ResampleResult cleaned = tomek_with_majority(smoted.dataset, spec, majority);
  const bool identical = cleaned.n_removed == 0;
  ResampleResult out = combine(ds, std::move(smoted), std::move(cleaned));
  if (identical) {
    out.warnings.push_back(
        "smote_tomek: Tomek cleaning removed no rows; sample counts are identical "
        "to plain SMOTE");
  }
  return out;
}

ResampleResult smote_enn(const Dataset& ds, const ResamplerSpec& spec) {
  spec.validate();
  ResampleResult smoted = smote(ds, spec);
  ResampleResult cleaned = enn(smoted.dataset, spec);
  return combine(ds, std::move(smoted), std::move(cleaned));
}

ResampleResult resample(const Dataset& ds, const ResamplerSpec& spec) {
  switch (spec.method) {
    case ResampleMethod::kNone: {
      ResampleResult r;
      r.dataset = ds;
      return r;
    }
    case ResampleMethod::kRandomOver: return random_oversample(ds, spec);
    case ResampleMethod::kSmote: return smote(ds, spec);
    case ResampleMethod::kAdasyn: return adasyn(ds, spec);
    case ResampleMethod::kBorderlineSmote: return borderline_smote(ds, spec);
    case ResampleMethod::kRandomUnder: return random_undersample(ds, spec);
    case ResampleMethod::kNearMiss1: return nearmiss1(ds, spec);
    case ResampleMethod::kTomekLinks: return tomek_links(ds, spec);
    case ResampleMethod::kClusterCentroids: return cluster_centroids(ds, spec);
    case ResampleMethod::kEnn: return enn(ds, spec);
    case ResampleMethod::kSmoteTomek: return smote_tomek(ds, spec);
    case ResampleMethod::kSmoteEnn: return smote_enn(ds, spec);
  }
  throw Error("resample: unknown method");
}

}  // namespace leakbench
