// Copyright 2026 The ARWA Authors
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

namespace arwa {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidRateError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

/// The Liouvillian has a nullspace of dimension other than one.
class NonUniqueSteadyStateError : public Error {
 public:
  NonUniqueSteadyStateError(const std::string& what, double smallest, double second_smallest)
      : Error(what), smallest_singular_value(smallest), second_smallest_singular_value(second_smallest) {}
  double smallest_singular_value;
  double second_smallest_singular_value;
};

/// A linear solve failed to factorize or to converge.
class SolverFailureError : public Error {
 public:
  SolverFailureError(const std::string& what, double residual) : Error(what), residual(residual) {}
  double residual;
};

/// The adaptive integrator's step size underflowed.
class StiffnessError : public Error {
 public:
  StiffnessError(const std::string& what, double time, double step) : Error(what), time(time), step(step) {}
  double time;
  double step;
};

/// Long-time average did not settle: the two halves of the averaging window disagree.
class NotStationaryError : public Error {
 public:
  NotStationaryError(const std::string& what, double first_half, double second_half)
      : Error(what), first_half(first_half), second_half(second_half) {}
  double first_half;
  double second_half;
};

class ModelError : public Error {
 public:
  using Error::Error;
};

/// Malformed user configuration; `field` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : Error(field + ": " + what), field(field) {}
  std::string field;
};

}  // namespace arwa
