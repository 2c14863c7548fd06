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

// Dual numbers a + b*eps with eps^2 = 0.
//
// User-defined function bodies are written once as generic code and
// instantiated for both double and Dual. Write them with `using std::abs;`
// (and friends) in scope so unqualified calls resolve for either type:
//
//   auto squareroot = [](auto args) {
//     using std::abs;
//     auto x = args[0];
//     auto z = x;
//     while (abs(z * z - x) > 1e-13) z = z - (z * z - x) / (2.0 * z);
//     return z;
//   };
//
// Comparisons look at the value part only, so control flow taken on a Dual
// matches the control flow taken on the corresponding double exactly.

#ifndef AMLKIT_DUAL_H_
#define AMLKIT_DUAL_H_

#include <cmath>
#include <numbers>

namespace amlkit {

struct Dual {
  double value = 0.0;
  double deriv = 0.0;

  constexpr Dual() = default;
  constexpr Dual(double v) : value(v) {}  // NOLINT: implicit by design of eps
  constexpr Dual(double v, double d) : value(v), deriv(d) {}

  constexpr Dual& operator+=(const Dual& o) {
    value += o.value;
    deriv += o.deriv;
    return *this;
  }
  constexpr Dual& operator-=(const Dual& o) {
    value -= o.value;
    deriv -= o.deriv;
    return *this;
  }
  constexpr Dual& operator*=(const Dual& o) {
    deriv = deriv * o.value + value * o.deriv;
    value *= o.value;
    return *this;
  }
  constexpr Dual& operator/=(const Dual& o) {
    const double q = value / o.value;
    deriv = (deriv - q * o.deriv) / o.value;
    value = q;
    return *this;
  }
};

constexpr Dual operator-(const Dual& a) { return {-a.value, -a.deriv}; }
constexpr Dual operator+(Dual a, const Dual& b) { return a += b; }
constexpr Dual operator-(Dual a, const Dual& b) { return a -= b; }
constexpr Dual operator*(Dual a, const Dual& b) { return a *= b; }
constexpr Dual operator/(Dual a, const Dual& b) { return a /= b; }
constexpr Dual operator+(Dual a, double b) { return {a.value + b, a.deriv}; }
constexpr Dual operator+(double a, Dual b) { return {a + b.value, b.deriv}; }
constexpr Dual operator-(Dual a, double b) { return {a.value - b, a.deriv}; }
constexpr Dual operator-(double a, Dual b) { return {a - b.value, -b.deriv}; }
constexpr Dual operator*(Dual a, double b) { return {a.value * b, a.deriv * b}; }
constexpr Dual operator*(double a, Dual b) { return {a * b.value, a * b.deriv}; }
constexpr Dual operator/(Dual a, double b) { return {a.value / b, a.deriv / b}; }
constexpr Dual operator/(double a, const Dual& b) { return Dual(a) / b; }

constexpr bool operator<(const Dual& a, const Dual& b) { return a.value < b.value; }
constexpr bool operator>(const Dual& a, const Dual& b) { return a.value > b.value; }
constexpr bool operator<=(const Dual& a, const Dual& b) { return a.value <= b.value; }
constexpr bool operator>=(const Dual& a, const Dual& b) { return a.value >= b.value; }
constexpr bool operator==(const Dual& a, const Dual& b) { return a.value == b.value; }

// f(a + b eps) = f(a) + f'(a) b eps
inline Dual exp(const Dual& a) {
  const double e = std::exp(a.value);
  return {e, e * a.deriv};
}
inline Dual log(const Dual& a) { return {std::log(a.value), a.deriv / a.value}; }
inline Dual sqrt(const Dual& a) {
  const double s = std::sqrt(a.value);
  return {s, a.deriv / (2.0 * s)};
}
inline Dual sin(const Dual& a) {
  return {std::sin(a.value), std::cos(a.value) * a.deriv};
}
inline Dual cos(const Dual& a) {
  return {std::cos(a.value), -std::sin(a.value) * a.deriv};
}
inline Dual tan(const Dual& a) {
  const double t = std::tan(a.value);
  return {t, (1.0 + t * t) * a.deriv};
}
inline Dual erf(const Dual& a) {
  const double g = 2.0 * std::numbers::inv_sqrtpi * std::exp(-a.value * a.value);
  return {std::erf(a.value), g * a.deriv};
}
// Derivative 0 is chosen at the kink.
inline Dual abs(const Dual& a) {
  if (a.value > 0) return a;
  if (a.value < 0) return -a;
  return {0.0, 0.0};
}
inline Dual pow(const Dual& a, double p) {
  if (p == 0.0) return {1.0, 0.0};
  return {std::pow(a.value, p), p * std::pow(a.value, p - 1.0) * a.deriv};
}
inline Dual min(const Dual& a, const Dual& b) { return b < a ? b : a; }
inline Dual max(const Dual& a, const Dual& b) { return b > a ? b : a; }

}  // namespace amlkit

#endif  // AMLKIT_DUAL_H_
