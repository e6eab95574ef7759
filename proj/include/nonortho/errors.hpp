// Copyright 2026 The nonortho Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

#include "nonortho/format.hpp"

namespace nonortho {

/// Input that violates a type invariant (e.g. a state vector that is not normalized).
class ValidationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A parameter lies outside the domain of the operation.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Two-state preparation requested for a pure state (p = 1) with |alpha|^2 < 1; both preparation states would coincide.
class DegenerateDecompositionError : public DomainError {
  public:
    using DomainError::DomainError;
};

/// Two independent evaluation routes disagreed. Indicates a bug, not bad input.
class InvariantViolation : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

namespace detail {

inline std::string describe(const char *name, double value) {
    return std::string(name) + " = " + format_number(value);
}

}  // namespace detail

}  // namespace nonortho
