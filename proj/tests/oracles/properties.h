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

// Randomised property suites shared by the unit tests and the acceptance
// binary. Each returns how many instances passed and the first failure.

#ifndef LEAKBENCH_TESTS_ORACLES_PROPERTIES_H_
#define LEAKBENCH_TESTS_ORACLES_PROPERTIES_H_

#include <cstddef>
#include <string>

namespace leakbench::testing {

struct SuiteOutcome {
  std::size_t passed = 0;
  std::size_t total = 0;
  std::string first_failure;

  bool all_passed() const { return total > 0 && passed == total; }
  void record(bool ok, const std::string& what) {
    ++total;
    if (ok) {
      ++passed;
    } else if (first_failure.empty()) {
      first_failure = what;
    }
  }
};

inline constexpr double kGradientRelTol = 1e-4;
inline constexpr double kGradientStep = 1e-5;
inline constexpr double kAucTol = 1e-12;
inline constexpr double kInterpolationTol = 1e-9;

// N in {0,1,4} x n_features in {2,5} x 20 seeds, central differences.
SuiteOutcome gradient_check_suite();
// 50 instances, n <= 200, against the pairwise statistic.
SuiteOutcome auc_suite();
// 50 SMOTE runs; betweenness, collinearity and neighbour membership.
SuiteOutcome smote_geometry_suite();
// k-NN, Tomek links, NearMiss-1 and ENN on instances with n <= 300.
SuiteOutcome neighbor_oracle_suite();
// 100 instances across the three split strategies.
SuiteOutcome split_suite();

}  // namespace leakbench::testing

#endif  // LEAKBENCH_TESTS_ORACLES_PROPERTIES_H_
