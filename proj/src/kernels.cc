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

#include "amlkit/kernels.h"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>

namespace amlkit::kernels {

namespace scalar {

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

std::size_t argmax_abs(const double* x, std::size_t n) {
  std::size_t best = 0;
  double best_abs = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::fabs(x[i]);
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  return best;
}

}  // namespace scalar

namespace {

Isa detect() {
  if (const char* env = std::getenv("AMLKIT_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return Isa::kScalar;
  }
  return avx2_available() ? Isa::kAvx2 : Isa::kScalar;
}

std::atomic<Isa>& selected() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool ok =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

Isa active_isa() { return selected().load(std::memory_order_relaxed); }

std::string_view isa_name(Isa isa) {
  return isa == Isa::kAvx2 ? "avx2" : "scalar";
}

void set_isa(Isa isa) {
  if (isa == Isa::kAvx2 && !avx2_available()) isa = Isa::kScalar;
  selected().store(isa, std::memory_order_relaxed);
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size() < y.size() ? x.size() : y.size();
  if (active_isa() == Isa::kAvx2) {
    avx2::axpy(a, x.data(), y.data(), n);
  } else {
    scalar::axpy(a, x.data(), y.data(), n);
  }
}

void scale(double a, std::span<double> x) {
  if (active_isa() == Isa::kAvx2) {
    avx2::scale(a, x.data(), x.size());
  } else {
    scalar::scale(a, x.data(), x.size());
  }
}

double dot(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size() < y.size() ? x.size() : y.size();
  if (active_isa() == Isa::kAvx2) return avx2::dot(x.data(), y.data(), n);
  return scalar::dot(x.data(), y.data(), n);
}

std::size_t argmax_abs(std::span<const double> x) {
  if (active_isa() == Isa::kAvx2) return avx2::argmax_abs(x.data(), x.size());
  return scalar::argmax_abs(x.data(), x.size());
}

}  // namespace amlkit::kernels
