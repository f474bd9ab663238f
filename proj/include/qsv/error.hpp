// Copyright 2026 The qsv Authors
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

namespace qsv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller passed a value outside the documented domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A strategy family was requested outside the parameter range where it is defined.
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed to converge or had no solution in its bracket.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Every Task A round was censored, so no point estimate exists.
/// Carries a one-sided 95% upper bound on the per-copy failure probability.
class AllCensoredError : public Error {
 public:
  AllCensoredError(const std::string& what, double upper_bound)
      : Error(what), upper_bound_(upper_bound) {}
  double upper_bound() const noexcept { return upper_bound_; }

 private:
  double upper_bound_;
};

}  // namespace qsv
