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

#ifndef LEAKBENCH_RESAMPLE_H_
#define LEAKBENCH_RESAMPLE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "leakbench/data.h"

namespace leakbench {

enum class ResampleMethod {
  kNone,
  kRandomOver,
  kSmote,
  kAdasyn,
  kBorderlineSmote,
  kRandomUnder,
  kNearMiss1,
  kTomekLinks,
  kClusterCentroids,
  kEnn,
  kSmoteTomek,
  kSmoteEnn,
};

std::string_view to_string(ResampleMethod method);
// Throws ConfigError on an unknown name.
ResampleMethod resample_method_from_string(std::string_view name);

struct ResamplerSpec {
  ResampleMethod method = ResampleMethod::kSmote;
  std::size_t k_neighbors = 5;
  // Neighborhood size of the Borderline-SMOTE danger test.
  std::size_t m_neighbors = 10;
  // Desired minority/majority count ratio after resampling.
  double target_ratio = 1.0;
  std::uint64_t seed = 0;
  // Permits all-pairs neighbor searches above kQuadraticRowLimit rows.
  bool allow_quadratic = false;

  void validate() const;
};

// One generated row. Parents index the resampler input; the row equals
// x[parent_a] + delta * (x[parent_b] - x[parent_a]) when `interpolated`.
// Cluster centroids are generated rows that are not interpolations; they carry
// interpolated = false with both parents set to the nearest original member.
struct SyntheticRecord {
  std::size_t output_row = 0;
  std::size_t parent_a = 0;
  std::size_t parent_b = 0;
  double delta = 0.0;
  bool interpolated = true;

  bool operator==(const SyntheticRecord&) const = default;
};

struct ResampleResult {
  Dataset dataset;
  std::size_t n_synthetic = 0;
  std::size_t n_removed = 0;
  // For single-stage methods: input indices. For the SMOTE + cleaning
  // combinations: indices into the post-SMOTE intermediate, see
  // intermediate_to_input.
  std::vector<std::size_t> removed_indices;
  std::vector<SyntheticRecord> provenance;
  // Combination methods only: input index of each intermediate row, or -1 for
  // rows SMOTE generated.
  std::vector<std::int64_t> intermediate_to_input;
  // ADASYN found no minority row with majority neighbors and ran plain SMOTE.
  bool fell_back_to_smote = false;
  std::vector<std::string> warnings;

  bool operator==(const ResampleResult&) const = default;
};

// Dispatches on spec.method.
ResampleResult resample(const Dataset& ds, const ResamplerSpec& spec);

ResampleResult smote(const Dataset& ds, const ResamplerSpec& spec);
ResampleResult random_oversample(const Dataset& ds, const ResamplerSpec& spec);
ResampleResult adasyn(const Dataset& ds, const ResamplerSpec& spec);
ResampleResult borderline_smote(const Dataset& ds, const ResamplerSpec& spec);
ResampleResult random_undersample(const Dataset& ds, const ResamplerSpec& spec);
ResampleResult nearmiss1(const Dataset& ds, const ResamplerSpec& spec);
ResampleResult tomek_links(const Dataset& ds, const ResamplerSpec& spec);
ResampleResult cluster_centroids(const Dataset& ds, const ResamplerSpec& spec);
ResampleResult enn(const Dataset& ds, const ResamplerSpec& spec);
ResampleResult smote_tomek(const Dataset& ds, const ResamplerSpec& spec);
ResampleResult smote_enn(const Dataset& ds, const ResamplerSpec& spec);

// x_a + delta * (x_b - x_a), the SMOTE interpolation rule.
void interpolate(std::span<const double> a, std::span<const double> b, double delta,
                 std::span<double> out);

// Splits `total` across rows in proportion to `weights` with largest-remainder
// rounding (ties to the lower index), so the parts always sum to `total`.
// All-zero weights yield all-zero parts.
std::vector<std::size_t> apportion(std::span<const double> weights, std::size_t total);

// Borderline-SMOTE classification of minority rows by the number of majority
// rows among their m nearest neighbors.
struct BorderlineSets {
  std::vector<std::size_t> danger;
  std::vector<std::size_t> noise;
  std::vector<std::size_t> safe;
};
BorderlineSets classify_borderline(const Dataset& ds, int minority_label,
                                   std::size_t m_neighbors);

// Label with the smaller count; label 1 on a tie.
int minority_label(const Dataset& ds);

// Majority-member removal set of every Tomek link, as sorted input indices.
std::vector<std::size_t> tomek_link_majority_members(const Dataset& ds);

}  // namespace leakbench

#endif  // LEAKBENCH_RESAMPLE_H_
