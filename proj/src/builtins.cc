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

#include "amlkit/builtins.h"

#include <array>
#include <cmath>
#include <numbers>

namespace amlkit {
namespace {

constexpr std::array<BuiltinInfo, kNumBuiltins> kInfo = {{
    {"abs", 1, false},
    {"exp", 1, true},
    {"log", 1, true},
    {"sqrt", 1, true},
    {"sin", 1, true},
    {"cos", 1, true},
    {"tan", 1, true},
    {"erf", 1, true},
    {"min", 2, false},
    {"max", 2, false},
}};

constexpr std::array<Builtin, kNumBuiltins> kAll = {
    Builtin::kAbs, Builtin::kExp, Builtin::kLog, Builtin::kSqrt,
    Builtin::kSin, Builtin::kCos, Builtin::kTan, Builtin::kErf,
    Builtin::kMin, Builtin::kMax,
};

constexpr double kTwoOverSqrtPi = 2.0 * std::numbers::inv_sqrtpi;

bool is_integer(double p) { return std::floor(p) == p; }

}  // namespace

const BuiltinInfo& builtin_info(Builtin op) {
  return kInfo[static_cast<int>(op)];
}

std::optional<Builtin> find_builtin(std::string_view name) {
  for (Builtin op : kAll) {
    if (builtin_info(op).name == name) return op;
  }
  return std::nullopt;
}

std::span<const Builtin> all_builtins() { return kAll; }

bool unary_in_domain(Builtin op, double x) {
  switch (op) {
    case Builtin::kLog:
      return x > 0.0;
    case Builtin::kSqrt:
      return x >= 0.0;
    default:
      return true;
  }
}

double unary_value(Builtin op, double x) {
  switch (op) {
    case Builtin::kAbs:
      return std::fabs(x);
    case Builtin::kExp:
      return std::exp(x);
    case Builtin::kLog:
      return std::log(x);
    case Builtin::kSqrt:
      return std::sqrt(x);
    case Builtin::kSin:
      return std::sin(x);
    case Builtin::kCos:
      return std::cos(x);
    case Builtin::kTan:
      return std::tan(x);
    case Builtin::kErf:
      return std::erf(x);
    case Builtin::kMin:
    case Builtin::kMax:
      break;
  }
  return std::nan("");
}

double unary_d1(Builtin op, double x) {
  switch (op) {
    case Builtin::kAbs:
      return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
    case Builtin::kExp:
      return std::exp(x);
    case Builtin::kLog:
      return 1.0 / x;
    case Builtin::kSqrt:
      return 0.5 / std::sqrt(x);
    case Builtin::kSin:
      return std::cos(x);
    case Builtin::kCos:
      return -std::sin(x);
    case Builtin::kTan: {
      const double t = std::tan(x);
      return 1.0 + t * t;
    }
    case Builtin::kErf:
      return kTwoOverSqrtPi * std::exp(-x * x);
    case Builtin::kMin:
    case Builtin::kMax:
      break;
  }
  return std::nan("");
}

double unary_d2(Builtin op, double x) {
  switch (op) {
    case Builtin::kAbs:
      return 0.0;
    case Builtin::kExp:
      return std::exp(x);
    case Builtin::kLog:
      return -1.0 / (x * x);
    case Builtin::kSqrt:
      return -0.25 / (x * std::sqrt(x));
    case Builtin::kSin:
      return -std::sin(x);
    case Builtin::kCos:
      return -std::cos(x);
    case Builtin::kTan: {
      const double t = std::tan(x);
      return 2.0 * t * (1.0 + t * t);
    }
    case Builtin::kErf:
      return -2.0 * x * kTwoOverSqrtPi * std::exp(-x * x);
    case Builtin::kMin:
    case Builtin::kMax:
      break;
  }
  return std::nan("");
}

bool pow_in_domain(double x, double p) { return x >= 0.0 || is_integer(p); }

double pow_value(double x, double p) {
  if (p == 2.0) return x * x;
  if (p == 1.0) return x;
  if (p == 0.0) return 1.0;
  return std::pow(x, p);
}

double pow_d1(double x, double p) {
  if (p == 2.0) return 2.0 * x;
  if (p == 1.0) return 1.0;
  if (p == 0.0) return 0.0;
  return p * std::pow(x, p - 1.0);
}

double pow_d2(double x, double p) {
  if (p == 2.0) return 2.0;
  if (p == 1.0 || p == 0.0) return 0.0;
  return p * (p - 1.0) * std::pow(x, p - 2.0);
}

}  // namespace amlkit
