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

#include <vector>

#include "fixtures.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace leakbench {
namespace {

using testing::make_dataset;
using testing::rows_of;

TEST(Neighbors, TiesBreakByLowerIndex) {
  const Dataset ds = make_dataset({{0}, {1}, {-1}, {1}, {2}}, {0, 0, 0, 0, 0});
  const std::vector<std::size_t> all{0, 1, 2, 3, 4};
  const std::vector<double> q{0.0};
  EXPECT_EQ(nearest_neighbors(ds.features, q, all, 4),
            (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_EQ(nearest_neighbors(ds.features, q, all, 3, 0),
            (std::vector<std::size_t>{1, 2, 3}));
}

TEST(Neighbors, FewerCandidatesThanK) {
  const Dataset ds = make_dataset({{0}, {5}}, {0, 1});
  const std::vector<std::size_t> cand{1};
  EXPECT_EQ(nearest_neighbors(ds.features, ds.features.row(0), cand, 4).size(), 1u);
  const std::vector<std::size_t> rows{0, 1};
  const auto nn = nearest_neighbors_of_rows(ds.features, rows, rows, 3);
  EXPECT_EQ(nn[0], (std::vector<std::size_t>{1}));
  EXPECT_EQ(nn[1], (std::vector<std::size_t>{0}));
}

TEST(Neighbors, MatchesBruteForceOnGrid) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dataset ds = testing::random_dataset(seed, 120, 2, 20, true);
    const auto x = rows_of(ds.features);
    const auto all = oracle::iota(ds.rows());
    const auto nn = nearest_neighbors_of_rows(ds.features, all, all, 7);
    for (std::size_t i = 0; i < ds.rows(); ++i) {
      ASSERT_EQ(nn[i], oracle::knn(x, x[i], all, 7, static_cast<long>(i))) << i;
    }
  }
}

}  // namespace
}  // namespace leakbench
