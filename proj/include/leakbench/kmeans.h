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

#ifndef LEAKBENCH_KMEANS_H_
#define LEAKBENCH_KMEANS_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "leakbench/matrix.h"

namespace leakbench {

struct KMeansOptions {
  std::size_t max_iterations = 100;
  // Stops once no centroid moves farther than this (Euclidean).
  double tolerance = 1e-4;
  // Independent k-means++ restarts; the lowest-inertia one wins.
  std::size_t n_init = 3;
  std::uint64_t seed = 0;
};

struct KMeansResult {
  Matrix centroids;
  std::vector<std::size_t> assignment;
  double inertia = 0.0;
  std::size_t iterations = 0;
};

// Lloyd's algorithm with greedy k-means++ seeding.
KMeansResult kmeans(const Matrix& points, std::size_t k, const KMeansOptions& options);

}  // namespace leakbench

#endif  // LEAKBENCH_KMEANS_H_
