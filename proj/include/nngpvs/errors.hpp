/*
 * Copyright 2026 The nngpvs Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace nngpvs {

// Malformed or inconsistent caller input (dimensions, files, parse errors).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parameter outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Loss of positive definiteness, singular systems, non-finite results.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke an invariant that the callee checks (stale factors,
// coefficients outside the active set).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Local conditioning failure while building NNGP factors at training row `row`
// (0-based).
class ConditioningError : public NumericalError {
 public:
  ConditioningError(const std::string& what, int row)
      : NumericalError(what), row_(row) {}
  int row() const noexcept { return row_; }

 private:
  int row_;
};

}  // namespace nngpvs
