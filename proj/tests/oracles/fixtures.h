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

#ifndef LEAKBENCH_TESTS_ORACLES_FIXTURES_H_
#define LEAKBENCH_TESTS_ORACLES_FIXTURES_H_

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "leakbench/data.h"
#include "leakbench/rng.h"
#include "oracles.h"

namespace leakbench::testing {

// Dataset with original-row provenance from literal rows.
inline Dataset make_dataset(const oracle::Rows& x, const std::vector<int>& y,
                            std::optional<std::vector<double>> time = std::nullopt) {
  Dataset ds;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ds.features.append_row(x[i]);
    ds.row_origin.push_back(RowOrigin::original(i));
  }
  ds.labels = y;
  ds.time = std::move(time);
  for (std::size_t j = 0; !x.empty() && j < x.front().size(); ++j) {
    ds.feature_names.push_back("f" + std::to_string(j));
  }
  return ds;
}

inline oracle::Rows rows_of(const Matrix& m) {
  oracle::Rows out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    out.emplace_back(r.begin(), r.end());
  }
  return out;
}

// Gaussian blobs with a shifted minority; `grid` rounds coordinates to
// integers so exact distance ties occur.
inline Dataset random_dataset(std::uint64_t seed, std::size_t n, std::size_t d,
                              std::size_t n_minority, bool grid = false) {
  Rng rng(seed);
  oracle::Rows x(n, std::vector<double>(d));
  std::vector<int> y(n, 0);
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = i < n_minority ? 1 : 0;
    for (std::size_t j = 0; j < d; ++j) {
      double v = rng.normal() * 2.0 + (y[i] ? 1.5 : 0.0);
      if (grid) v = std::round(v);
      x[i][j] = v;
    }
    t[i] = std::floor(rng.uniform(0.0, 50.0));
  }
  // Interleave the classes so minority rows are not all at the front.
  std::vector<std::size_t> perm = oracle::iota(n);
  rng.shuffle(std::span<std::size_t>(perm));
  oracle::Rows px;
  std::vector<int> py;
  for (const std::size_t p : perm) {
    px.push_back(x[p]);
    py.push_back(y[p]);
  }
  return make_dataset(px, py, t);
}

}  // namespace leakbench::testing

#endif  // LEAKBENCH_TESTS_ORACLES_FIXTURES_H_
