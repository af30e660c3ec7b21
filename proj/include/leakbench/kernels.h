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

#ifndef LEAKBENCH_KERNELS_H_
#define LEAKBENCH_KERNELS_H_

#include <cstddef>
#include <span>
#include <string_view>

// Inner-loop arithmetic kernels with runtime ISA selection.
//
// Every variant accumulates reductions in the same order: four interleaved
// lanes over the largest multiple-of-four prefix, a pairwise lane sum
// (l0 + l1) + (l2 + l3), then the tail added sequentially. Multiplies and adds
// are never fused. With that ordering the scalar and SIMD variants return
// bit-identical results, so experiment output does not depend on the host CPU.

namespace leakbench::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

// True when the variant was compiled in and the running CPU supports it.
bool isa_supported(Isa isa);

// The variant used by the dispatching entry points. Selected once at startup:
// the LEAKBENCH_SIMD environment variable ("scalar", "avx2", "neon") wins when
// supported, otherwise the widest supported variant.
Isa active_isa();

// Overrides the active variant. Throws leakbench::Error when unsupported.
void set_isa(Isa isa);

// Sum of a[i] * b[i].
double dot(std::span<const double> a, std::span<const double> b);

// Sum of (a[i] - b[i])^2.
double squared_distance(std::span<const double> a, std::span<const double> b);

// y[i] += alpha * x[i].
void axpy(double alpha, std::span<const double> x, std::span<double> y);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace neon
#endif

}  // namespace leakbench::kernels

#endif  // LEAKBENCH_KERNELS_H_
