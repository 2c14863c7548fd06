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

#ifndef AMLKIT_ERRORS_H_
#define AMLKIT_ERRORS_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace amlkit {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// add_variable called with lb > ub (or NaN bounds).
class BoundOrderError : public Error {
 public:
  using Error::Error;
};

// A VarId / ParamId was used with a model that did not create it.
class OwnershipError : public Error {
 public:
  using Error::Error;
};

// Unknown function symbol, duplicate registration, or missing callbacks.
class RegistrationError : public Error {
 public:
  using Error::Error;
};

// Structural misuse of a model (e.g. nonlinear parts passed to the
// standard-form extractor).
class ModelError : public Error {
 public:
  using Error::Error;
};

// Domain violation during graph evaluation. `node()` is the index of the
// offending node; `constraint()` is set by the NLP evaluator (-1 otherwise).
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, int32_t node,
                  int32_t constraint = -1)
      : Error(what), node_(node), constraint_(constraint) {}
  int32_t node() const { return node_; }
  int32_t constraint() const { return constraint_; }

 private:
  int32_t node_;
  int32_t constraint_;
};

// Raised by user-function bodies whose inner iteration does not converge.
class IterationLimitError : public Error {
 public:
  using Error::Error;
};

// Second-order derivatives requested through a user-defined function.
class UnsupportedSecondOrderError : public Error {
 public:
  using Error::Error;
};

// Malformed or unknown configuration keys and values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Coloring / product-column mismatch in Hessian recovery.
class RecoveryError : public Error {
 public:
  using Error::Error;
};

}  // namespace amlkit

#endif  // AMLKIT_ERRORS_H_
