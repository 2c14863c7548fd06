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

// AVX2 variants. Compiled with per-function target attributes so the rest of
// the library stays baseline x86-64; callers reach these only after
// avx2_available() returned true.

#include <cmath>
#include <cstddef>

#include "amlkit/kernels.h"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define AMLKIT_AVX2_TARGET __attribute__((target("avx2,fma")))
#define AMLKIT_HAVE_X86 1
#else
#define AMLKIT_AVX2_TARGET
#define AMLKIT_HAVE_X86 0
#endif

namespace amlkit::kernels::avx2 {

#if AMLKIT_HAVE_X86

// mul + add kept separate so results match scalar::axpy bit for bit.
AMLKIT_AVX2_TARGET void axpy(double a, const double* x, double* y,
                             std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d y0 = _mm256_loadu_pd(y + i);
    __m256d y1 = _mm256_loadu_pd(y + i + 4);
    const __m256d p0 = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    const __m256d p1 = _mm256_mul_pd(va, _mm256_loadu_pd(x + i + 4));
    y0 = _mm256_add_pd(y0, p0);
    y1 = _mm256_add_pd(y1, p1);
    _mm256_storeu_pd(y + i, y0);
    _mm256_storeu_pd(y + i + 4, y1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), p));
  }
  for (; i < n; ++i) {
    const double p = a * x[i];
    y[i] = y[i] + p;
  }
}

AMLKIT_AVX2_TARGET void scale(double a, double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) x[i] *= a;
}

AMLKIT_AVX2_TARGET double dot(const double* x, const double* y,
                              std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i),
                           acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4),
                           _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i),
                           acc0);
  }
  const __m256d acc = _mm256_add_pd(acc0, acc1);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

AMLKIT_AVX2_TARGET std::size_t argmax_abs(const double* x, std::size_t n) {
  if (n < 8) {
    return scalar::argmax_abs(x, n);
  }
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d best = _mm256_set1_pd(-1.0);
  __m256d best_idx = _mm256_setzero_pd();
  __m256d idx = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  const __m256d four = _mm256_set1_pd(4.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(x + i));
    const __m256d gt = _mm256_cmp_pd(v, best, _CMP_GT_OQ);
    best = _mm256_blendv_pd(best, v, gt);
    best_idx = _mm256_blendv_pd(best_idx, idx, gt);
    idx = _mm256_add_pd(idx, four);
  }
  alignas(32) double bv[4];
  alignas(32) double bi[4];
  _mm256_store_pd(bv, best);
  _mm256_store_pd(bi, best_idx);
  double best_abs = bv[0];
  double best_at = bi[0];
  for (int lane = 1; lane < 4; ++lane) {
    if (bv[lane] > best_abs || (bv[lane] == best_abs && bi[lane] < best_at)) {
      best_abs = bv[lane];
      best_at = bi[lane];
    }
  }
  std::size_t result = static_cast<std::size_t>(best_at);
  for (; i < n; ++i) {
    const double a = std::fabs(x[i]);
    if (a > best_abs) {
      best_abs = a;
      result = i;
    }
  }
  return result;
}

#else

void axpy(double a, const double* x, double* y, std::size_t n) {
  scalar::axpy(a, x, y, n);
}
void scale(double a, double* x, std::size_t n) { scalar::scale(a, x, n); }
double dot(const double* x, const double* y, std::size_t n) {
  return scalar::dot(x, y, n);
}
std::size_t argmax_abs(const double* x, std::size_t n) {
  return scalar::argmax_abs(x, n);
}

#endif

}  // namespace amlkit::kernels::avx2
