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

#include "leakbench/neighbors.h"

#include <algorithm>
#include <utility>

#include "leakbench/kernels.h"

namespace leakbench {

std::vector<std::size_t> nearest_neighbors(const Matrix& points,
                                           std::span<const double> query,
                                           std::span<const std::size_t> candidates,
                                           std::size_t k,
                                           std::optional<std::size_t> exclude) {
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(candidates.size());
  for (const std::size_t c : candidates) {
    if (exclude && c == *exclude) continue;
    scored.emplace_back(kernels::squared_distance(points.row(c), query), c);
  }
  const std::size_t take = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + take, scored.end());
  std::vector<std::size_t> out(take);
  for (std::size_t i = 0; i < take; ++i) out[i] = scored[i].second;
  return out;
}

std::vector<std::vector<std::size_t>> nearest_neighbors_of_rows(
    const Matrix& points, std::span<const std::size_t> queries,
    std::span<const std::size_t> candidates, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  out.reserve(queries.size());
  for (const std::size_t q : queries) {
    out.push_back(nearest_neighbors(points, points.row(q), candidates, k, q));
  }
  return out;
}

}  // namespace leakbench
