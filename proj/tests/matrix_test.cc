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

#include "leakbench/matrix.h"

#include <vector>

#include "gtest/gtest.h"
#include "leakbench/common.h"

namespace leakbench {
namespace {

TEST(Matrix, RowMajorLayout) {
  Matrix m(2, 3);
  m(0, 2) = 5.0;
  m(1, 0) = 7.0;
  EXPECT_EQ(m.data()[2], 5.0);
  EXPECT_EQ(m.data()[3], 7.0);
  EXPECT_EQ(m.row(1)[0], 7.0);
}

TEST(Matrix, AppendRowFixesWidth) {
  Matrix m;
  EXPECT_TRUE(m.empty());
  const std::vector<double> r{1, 2};
  m.append_row(r);
  m.append_row(r);
  EXPECT_EQ(m.rows(), 2u);
  EXPECT_EQ(m.cols(), 2u);
  const std::vector<double> bad{1, 2, 3};
  EXPECT_THROW(m.append_row(bad), Error);
}

}  // namespace
}  // namespace leakbench
