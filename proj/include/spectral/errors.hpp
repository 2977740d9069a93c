// Copyright 2026 The spectral-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPECTRAL_ERRORS_HPP_
#define SPECTRAL_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace spectral {

// Malformed or out-of-contract arguments. The CLI maps this to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Factorization failures and other floating-point breakdowns (exit code 3).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A hypothesis required by a bound does not hold for the given profile.
class HypothesisError : public InputError {
 public:
  using InputError::InputError;
};

// The target of a release is not identifiable (sigma_k == sigma_{k+1}).
class DegenerateTruthError : public InputError {
 public:
  using InputError::InputError;
};

// Singular values of the simulated diffusion came closer than the configured
// floor even after the maximum number of step halvings.
class CollisionError : public NumericError {
 public:
  CollisionError(const std::string& what, double time, int index)
      : NumericError(what), time_(time), index_(index) {}

  double time() const { return time_; }
  int index() const { return index_; }

 private:
  double time_;
  int index_;
};

}  // namespace spectral

#endif  // SPECTRAL_ERRORS_HPP_
