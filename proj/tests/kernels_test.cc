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

#include "leakbench/kernels.h"

#include <cmath>
#include <cstring>
#include <vector>

#include "gtest/gtest.h"
#include "leakbench/common.h"
#include "leakbench/rng.h"
#include "oracles.h"

namespace leakbench::kernels {
namespace {

std::vector<double> random_vector(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal() * std::pow(10.0, rng.uniform(-3.0, 3.0));
  return v;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

TEST(Kernels, ScalarMatchesLaneOracle) {
  Rng rng(3);
  for (std::size_t n = 0; n < 40; ++n) {
    const auto a = random_vector(rng, n);
    const auto b = random_vector(rng, n);
    EXPECT_TRUE(same_bits(scalar::dot(a.data(), b.data(), n), oracle::lane_dot(a, b))) << n;
  }
}

TEST(Kernels, SquaredDistanceIsDotOfDifference) {
  Rng rng(4);
  for (std::size_t n = 0; n < 40; ++n) {
    const auto a = random_vector(rng, n);
    const auto b = random_vector(rng, n);
    std::vector<double> diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = a[i] - b[i];
    EXPECT_TRUE(same_bits(scalar::squared_distance(a.data(), b.data(), n),
                          oracle::lane_dot(diff, diff)));
  }
}

class SimdEquivalence : public ::testing::TestWithParam<Isa> {};

TEST_P(SimdEquivalence, BitIdenticalToScalar) {
  const Isa isa = GetParam();
  if (!isa_supported(isa)) GTEST_SKIP() << isa_name(isa) << " not available on this host";
  using Dot = double (*)(const double*, const double*, std::size_t);
  using Axpy = void (*)(double, const double*, double*, std::size_t);
  Dot dot_v = nullptr;
  Dot dist_v = nullptr;
  Axpy axpy_v = nullptr;
#if defined(__x86_64__) || defined(_M_X64)
  if (isa == Isa::kAvx2) {
    dot_v = avx2::dot;
    dist_v = avx2::squared_distance;
    axpy_v = avx2::axpy;
  }
#endif
#if defined(__aarch64__)
  if (isa == Isa::kNeon) {
    dot_v = neon::dot;
    dist_v = neon::squared_distance;
    axpy_v = neon::axpy;
  }
#endif
  ASSERT_NE(dot_v, nullptr) << "supported ISA without compiled kernels";
  Rng rng(5);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = rng.index(70);
    const std::size_t offset = rng.index(3);  // unaligned starts
    auto a = random_vector(rng, n + offset);
    auto b = random_vector(rng, n + offset);
    const double* pa = a.data() + offset;
    const double* pb = b.data() + offset;
    ASSERT_TRUE(same_bits(dot_v(pa, pb, n), scalar::dot(pa, pb, n))) << "n=" << n;
    ASSERT_TRUE(same_bits(dist_v(pa, pb, n), scalar::squared_distance(pa, pb, n)));
    const double alpha = rng.normal();
    std::vector<double> y1(b.begin() + static_cast<std::ptrdiff_t>(offset), b.end());
    std::vector<double> y2 = y1;
    axpy_v(alpha, pa, y1.data(), n);
    scalar::axpy(alpha, pa, y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) ASSERT_TRUE(same_bits(y1[i], y2[i]));
  }
}

INSTANTIATE_TEST_SUITE_P(AllIsas, SimdEquivalence, ::testing::Values(Isa::kAvx2, Isa::kNeon),
                         [](const auto& info) { return std::string(isa_name(info.param)); });

TEST(Kernels, DispatchFollowsSetIsa) {
  const Isa before = active_isa();
  set_isa(Isa::kScalar);
  EXPECT_EQ(active_isa(), Isa::kScalar);
  std::vector<double> a{1, 2, 3, 4, 5}, b{5, 4, 3, 2, 1};
  EXPECT_EQ(dot(a, b), 35.0);
  EXPECT_EQ(squared_distance(a, b), 40.0);
  axpy(2.0, a, b);
  EXPECT_EQ(b, (std::vector<double>{7, 8, 9, 10, 11}));
  set_isa(before);
}

TEST(Kernels, UnsupportedIsaIsRejected) {
  for (const Isa isa : {Isa::kAvx2, Isa::kNeon}) {
    if (!isa_supported(isa)) {
      EXPECT_THROW(set_isa(isa), Error);
    }
  }
  EXPECT_TRUE(isa_supported(Isa::kScalar));
}

}  // namespace
}  // namespace leakbench::kernels
