// Copyright 2026 The Supermap Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace supermap {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes or tensor factorizations are inconsistent.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A value violates the invariants of the type it is being turned into
// (non-Hermitian, not positive, not normalized, not an isometry, ...).
class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  explicit ValidationError(const std::string& what) : Error(what) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_ = 0.0;
};

// The operation requires a deterministic supermap.
class NotDeterministicError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace supermap
