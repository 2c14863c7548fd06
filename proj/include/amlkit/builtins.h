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

// The builtin function library. Arithmetic (+, -, *, /, ^) is represented
// by dedicated graph node kinds; everything callable by name lives here.
//
// Every unary builtin carries explicit value, first- and second-derivative
// rules. abs, min and max are treated as piecewise linear: their second
// derivative is 0 everywhere and the kink takes derivative 0 (abs) or
// selects the first argument (min/max ties).

#ifndef AMLKIT_BUILTINS_H_
#define AMLKIT_BUILTINS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "amlkit/dual.h"

namespace amlkit {

enum class Builtin : uint8_t {
  kAbs,
  kExp,
  kLog,
  kSqrt,
  kSin,
  kCos,
  kTan,
  kErf,
  kMin,
  kMax,
};

inline constexpr int kNumBuiltins = 10;

struct BuiltinInfo {
  std::string_view name;
  int arity;
  // False for abs/min/max: no curvature contribution of their own.
  bool smooth;
};

const BuiltinInfo& builtin_info(Builtin op);
std::optional<Builtin> find_builtin(std::string_view name);
std::span<const Builtin> all_builtins();

// Unary rules. `in_domain` is false for log(x <= 0) and sqrt(x < 0).
bool unary_in_domain(Builtin op, double x);
double unary_value(Builtin op, double x);
double unary_d1(Builtin op, double x);
double unary_d2(Builtin op, double x);

// Generic application used by the graph sweeps. On Dual inputs the value
// rule is lifted with d1 and the derivative rule with d2.
inline double apply_unary(Builtin op, double x) { return unary_value(op, x); }
inline Dual apply_unary(Builtin op, const Dual& x) {
  return {unary_value(op, x.value), unary_d1(op, x.value) * x.deriv};
}
inline double apply_unary_d1(Builtin op, double x) { return unary_d1(op, x); }
inline Dual apply_unary_d1(Builtin op, const Dual& x) {
  return {unary_d1(op, x.value), unary_d2(op, x.value) * x.deriv};
}

// min/max: index (0 or 1) of the argument that is selected.
inline int binary_selected(Builtin op, double a, double b) {
  if (op == Builtin::kMin) return b < a ? 1 : 0;
  return b > a ? 1 : 0;
}

// x^p with real exponent p. Negative base with non-integer p is outside the
// domain.
bool pow_in_domain(double x, double p);
double pow_value(double x, double p);
double pow_d1(double x, double p);
double pow_d2(double x, double p);

inline double apply_pow(double x, double p) { return pow_value(x, p); }
inline Dual apply_pow(const Dual& x, double p) {
  return {pow_value(x.value, p), pow_d1(x.value, p) * x.deriv};
}
inline double apply_pow_d1(double x, double p) { return pow_d1(x, p); }
inline Dual apply_pow_d1(const Dual& x, double p) {
  return {pow_d1(x.value, p), pow_d2(x.value, p) * x.deriv};
}

}  // namespace amlkit

#endif  // AMLKIT_BUILTINS_H_
