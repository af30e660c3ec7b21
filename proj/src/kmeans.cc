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

#include "leakbench/kmeans.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "leakbench/common.h"
#include "leakbench/kernels.h"
#include "leakbench/rng.h"

namespace leakbench {
namespace {

// Draws an index with probability proportional to weights; falls back to a
// uniform draw when every weight is zero.
std::size_t weighted_draw(const std::vector<double>& weights, double total, Rng& rng) {
  if (!(total > 0.0)) return rng.index(weights.size());
  const double target = rng.uniform() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (target < acc) return i;
  }
  for (std::size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0.0) return i;
  }
  return weights.size() - 1;
}

Matrix seed_plus_plus(const Matrix& points, std::size_t k, Rng& rng) {
  const std::size_t n = points.rows();
  const std::size_t trials =
      2 + static_cast<std::size_t>(std::log(static_cast<double>(k)));
  Matrix centers(0, 0);
  centers.reserve_rows(k);
  std::vector<double> closest(n);
  std::size_t first = rng.index(n);
  centers.append_row(points.row(first));
  double potential = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    closest[i] = kernels::squared_distance(points.row(i), points.row(first));
    potential += closest[i];
  }
  std::vector<double> candidate_dist(n);
  std::vector<double> best_dist(n);
  while (centers.rows() < k) {
    std::size_t best = 0;
    double best_potential = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < trials; ++t) {
      const std::size_t c = weighted_draw(closest, potential, rng);
      double p = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        candidate_dist[i] = std::min(
            closest[i], kernels::squared_distance(points.row(i), points.row(c)));
        p += candidate_dist[i];
      }
      if (p < best_potential) {
        best_potential = p;
        best = c;
        best_dist.swap(candidate_dist);
      }
    }
    centers.append_row(points.row(best));
    closest.swap(best_dist);
    potential = best_potential;
  }
  return centers;
}

KMeansResult lloyd(const Matrix& points, Matrix centers, const KMeansOptions& opt) {
  const std::size_t n = points.rows();
  const std::size_t k = centers.rows();
  const std::size_t d = points.cols();
  KMeansResult result;
  result.assignment.assign(n, 0);
  for (std::size_t iter = 1; iter <= opt.max_iterations; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double dist = kernels::squared_distance(points.row(i), centers.row(c));
        if (dist < best) {
          best = dist;
          result.assignment[i] = c;
        }
      }
    }
    Matrix next(k, d);
    std::vector<std::size_t> count(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = result.assignment[i];
      kernels::axpy(1.0, points.row(i), next.row(c));
      ++count[c];
    }
    double max_shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      auto row = next.row(c);
      if (count[c] == 0) {
        // Empty cluster keeps its previous position.
        std::copy(centers.row(c).begin(), centers.row(c).end(), row.begin());
        continue;
      }
      const double inv = 1.0 / static_cast<double>(count[c]);
      for (double& v : row) v *= inv;
      max_shift = std::max(max_shift,
                           std::sqrt(kernels::squared_distance(row, centers.row(c))));
    }
    centers = std::move(next);
    result.iterations = iter;
    if (max_shift <= opt.tolerance) break;
  }
  // Final assignment and inertia against the returned centroids.
  result.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      const double dist = kernels::squared_distance(points.row(i), centers.row(c));
      if (dist < best) {
        best = dist;
        result.assignment[i] = c;
      }
    }
    result.inertia += best;
  }
  result.centroids = std::move(centers);
  return result;
}

}  // namespace

KMeansResult kmeans(const Matrix& points, std::size_t k, const KMeansOptions& options) {
  if (k == 0) throw Error("kmeans: k must be positive");
  if (k > points.rows()) {
    throw Error("kmeans: k (" + std::to_string(k) + ") exceeds point count (" +
                std::to_string(points.rows()) + ")");
  }
  Rng rng(mix_seed({options.seed, 0x6B6D65616E73ULL}));
  KMeansResult best;
  bool have = false;
  for (std::size_t run = 0; run < std::max<std::size_t>(1, options.n_init); ++run) {
    KMeansResult r = lloyd(points, seed_plus_plus(points, k, rng), options);
    if (!have || r.inertia < best.inertia) {
      best = std::move(r);
      have = true;
    }
  }
  return best;
}

}  // namespace leakbench
