// Copyright 2026 The amlkit Authors
//
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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "amlkit/kernels.h"

namespace amlkit::kernels {
namespace {

std::vector<double> random_vector(std::size_t n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

class KernelSizes : public ::testing::TestWithParam<std::size_t> {
 protected:
  void SetUp() override {
    if (!avx2_available()) GTEST_SKIP() << "no AVX2 on this host";
  }
};

TEST_P(KernelSizes, AxpyMatchesScalarBitForBit) {
  const std::size_t n = GetParam();
  const std::vector<double> x = random_vector(n, 1);
  std::vector<double> y1 = random_vector(n, 2), y2 = y1;
  scalar::axpy(-0.37, x.data(), y1.data(), n);
  avx2::axpy(-0.37, x.data(), y2.data(), n);
  for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(y1[i], y2[i]) << i;
}

TEST_P(KernelSizes, ScaleMatchesScalarBitForBit) {
  const std::size_t n = GetParam();
  std::vector<double> a = random_vector(n, 3), b = a;
  scalar::scale(1.0 / 3.0, a.data(), n);
  avx2::scale(1.0 / 3.0, b.data(), n);
  for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(a[i], b[i]) << i;
}

TEST_P(KernelSizes, DotAgreesToRounding) {
  const std::size_t n = GetParam();
  const std::vector<double> x = random_vector(n, 4), y = random_vector(n, 5);
  double mag = 0.0;
  for (std::size_t i = 0; i < n; ++i) mag += std::fabs(x[i] * y[i]);
  EXPECT_NEAR(scalar::dot(x.data(), y.data(), n), avx2::dot(x.data(), y.data(), n),
              1e-14 * (1.0 + mag));
}

TEST_P(KernelSizes, ArgmaxAbsIdentical) {
  const std::size_t n = GetParam();
  if (n == 0) return;
  std::vector<double> x = random_vector(n, 6);
  EXPECT_EQ(scalar::argmax_abs(x.data(), n), avx2::argmax_abs(x.data(), n));
  // Ties resolve to the first occurrence in both.
  x.assign(n, 1.0);
  x[n / 2] = -2.0;
  x[n - 1] = 2.0;
  EXPECT_EQ(scalar::argmax_abs(x.data(), n), avx2::argmax_abs(x.data(), n));
  EXPECT_EQ(avx2::argmax_abs(x.data(), n), n == 1 ? 0 : n / 2);
}

INSTANTIATE_TEST_SUITE_P(Lengths, KernelSizes,
                         ::testing::Values(0, 1, 3, 4, 5, 7, 8, 9, 15, 16, 17,
                                           31, 64, 100, 1023));

TEST(Dispatch, ForcedScalarIsHonored) {
  const Isa before = active_isa();
  set_isa(Isa::kScalar);
  EXPECT_EQ(active_isa(), Isa::kScalar);
  std::vector<double> y{1.0, 2.0};
  const std::vector<double> x{1.0, 1.0};
  axpy(2.0, x, y);
  EXPECT_EQ(y[0], 3.0);
  EXPECT_EQ(y[1], 4.0);
  set_isa(before);
}

TEST(Dispatch, NamesAreStable) {
  EXPECT_EQ(isa_name(Isa::kScalar), "scalar");
  EXPECT_EQ(isa_name(Isa::kAvx2), "avx2");
}

}  // namespace
}  // namespace amlkit::kernels
