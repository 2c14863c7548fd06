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

#ifndef AMLKIT_IDS_H_
#define AMLKIT_IDS_H_

#include <compare>
#include <cstdint>

namespace amlkit {

// Dense index of one scalar decision variable. `owner` is the id of the
// Model that issued it; indices are consecutive from 0 in creation order.
struct VarId {
  uint32_t index = 0;
  uint32_t owner = 0;

  friend bool operator==(const VarId&, const VarId&) = default;
  friend auto operator<=>(const VarId& a, const VarId& b) {
    if (auto c = a.index <=> b.index; c != 0) return c;
    return a.owner <=> b.owner;
  }
};

// Index into a model's parameter value array.
struct ParamId {
  uint32_t index = 0;
  uint32_t owner = 0;

  friend bool operator==(const ParamId&, const ParamId&) = default;
};

// Insertion index of an algebraic (scalar or cone) constraint. Never reused.
struct ConstraintId {
  uint32_t index = 0;

  friend bool operator==(const ConstraintId&, const ConstraintId&) = default;
};

enum class Sense : uint8_t { kLessEqual, kEqual, kGreaterEqual };

enum class ObjectiveSense : uint8_t { kMinimize, kMaximize };

}  // namespace amlkit

#endif  // AMLKIT_IDS_H_
