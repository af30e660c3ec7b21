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

#ifndef LEAKBENCH_NEIGHBORS_H_
#define LEAKBENCH_NEIGHBORS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "leakbench/matrix.h"

namespace leakbench {

// Rows above which all-pairs neighbor searches must be explicitly allowed.
inline constexpr std::size_t kQuadraticRowLimit = 50000;

// Brute-force k nearest neighbors of `query` among the candidate rows of
// `points` under Euclidean distance. Ties are broken by lower row index. The
// returned indices are rows of `points`, nearest first. `exclude` removes one
// row (the query itself) from consideration. Returns fewer than k indices when
// there are not enough candidates.
std::vector<std::size_t> nearest_neighbors(const Matrix& points,
                                           std::span<const double> query,
                                           std::span<const std::size_t> candidates,
                                           std::size_t k,
                                           std::optional<std::size_t> exclude = {});

// nearest_neighbors for each row in `queries`, excluding the query row itself.
std::vector<std::vector<std::size_t>> nearest_neighbors_of_rows(
    const Matrix& points, std::span<const std::size_t> queries,
    std::span<const std::size_t> candidates, std::size_t k);

}  // namespace leakbench

#endif  // LEAKBENCH_NEIGHBORS_H_
