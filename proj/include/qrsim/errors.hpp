// Copyright 2026 The qrsim Authors
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

namespace qrsim {

/// Argument outside the mathematical domain of an operation (bad index,
/// digit out of range, shape mismatch).
class DomainError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Input data that fails validation (normalization, probability sums,
/// malformed configuration). `field()` names the offending item when known.
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(const std::string &message, std::string field = {})
        : std::runtime_error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

    const std::string &field() const noexcept { return field_; }

  private:
    std::string field_;
};

/// A forced measurement outcome whose Born probability is zero.
class ImpossibleBranchError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A requested computation exceeds its size budget.
class ResourceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace qrsim
