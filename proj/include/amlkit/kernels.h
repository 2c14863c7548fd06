// Copyright 2026 The amlkit Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense vector kernels used by the simplex tableau and the evaluators.
//
// Every kernel has a portable scalar reference in `scalar::` and, on x86-64,
// an AVX2 variant in `avx2::`. The unqualified entry points dispatch at
// runtime on the detected CPU. Setting AMLKIT_SIMD=scalar in the
// environment (or calling set_isa) pins the scalar path.
//
// axpy and scale are bit-identical across variants (no FMA contraction);
// dot and sum reassociate into four lanes and agree to rounding.

#ifndef AMLKIT_KERNELS_H_
#define AMLKIT_KERNELS_H_

#include <cstddef>
#include <span>
#include <string_view>

namespace amlkit::kernels {

enum class Isa { kScalar, kAvx2 };

bool avx2_available();

// Currently selected variant.
Isa active_isa();
std::string_view isa_name(Isa isa);

// Pins a variant. Requesting kAvx2 on a CPU without it falls back to scalar.
void set_isa(Isa isa);

// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
// x *= a
void scale(double a, std::span<double> x);
double dot(std::span<const double> x, std::span<const double> y);
// Index of the entry with the largest |x_i|; 0 for empty input.
std::size_t argmax_abs(std::span<const double> x);

namespace scalar {
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(double a, double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
std::size_t argmax_abs(const double* x, std::size_t n);
}  // namespace scalar

namespace avx2 {
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(double a, double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
std::size_t argmax_abs(const double* x, std::size_t n);
}  // namespace avx2

}  // namespace amlkit::kernels

#endif  // AMLKIT_KERNELS_H_
