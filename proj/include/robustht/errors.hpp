// Copyright 2026 The robustht Authors
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

#ifndef ROBUSTHT_ERRORS_HPP_
#define ROBUSTHT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace robustht {

// Base for every error caused by the inputs rather than by a bug. The CLI
// maps these to exit code 1.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDistribution : public DomainError {
 public:
  using DomainError::DomainError;
};

class AlphabetMismatch : public DomainError {
 public:
  AlphabetMismatch(std::size_t a, std::size_t b)
      : DomainError("alphabet mismatch: " + std::to_string(a) + " vs " +
                    std::to_string(b)) {}
};

// The two uncertainty sets intersect, so no test can separate them.
class SetsOverlap : public DomainError {
 public:
  using DomainError::DomainError;
};

class NoFiniteClip : public DomainError {
 public:
  using DomainError::DomainError;
};

class PreconditionViolated : public DomainError {
 public:
  using DomainError::DomainError;
};

class StateSpaceExceeded : public DomainError {
 public:
  using DomainError::DomainError;
};

class BudgetExhausted : public DomainError {
 public:
  using DomainError::DomainError;
};

class ConditionNotMet : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace robustht

#endif  // ROBUSTHT_ERRORS_HPP_
