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

#include "properties.h"

#include "gtest/gtest.h"

namespace leakbench::testing {
namespace {

void expect_all(const SuiteOutcome& s) {
  EXPECT_GT(s.total, 0u);
  EXPECT_TRUE(s.all_passed()) << s.passed << "/" << s.total << ": " << s.first_failure;
}

TEST(Properties, Gradient) { expect_all(gradient_check_suite()); }
TEST(Properties, Auc) { expect_all(auc_suite()); }
TEST(Properties, SmoteGeometry) { expect_all(smote_geometry_suite()); }
TEST(Properties, Split) { expect_all(split_suite()); }

TEST(Properties, NeighborOracles) { expect_all(neighbor_oracle_suite()); }

}  // namespace
}  // namespace leakbench::testing
