// Copyright (c) 2026 The qreson authors
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

namespace qreson {

/// Base class for all qreson errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or out-of-contract input (dimension mismatch, bad range, ...).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// A configured resource cap (register size, matrix dimension) was exceeded.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

/// Spectral clustering could not separate eigenvalue groups at the requested
/// tolerance.
class AmbiguousGroupingError : public Error {
 public:
  using Error::Error;
};

/// An operation that requires a generic parameter set was handed a
/// non-generic one (members of one eigenvalue group disagree structurally).
class GenericnessError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature failed to converge within its evaluation budget.
/// Carries the last two successive estimates for diagnosis.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& msg, double last, double previous)
      : Error(msg + " (last=" + std::to_string(last) +
              ", previous=" + std::to_string(previous) + ")"),
        last_estimate(last),
        previous_estimate(previous) {}
  double last_estimate;
  double previous_estimate;
};

/// Dense eigendecomposition did not meet its residual contract.
class EigensolverError : public Error {
 public:
  using Error::Error;
};

/// Vector family too ill-conditioned to admit a dual basis.
class DegenerateBasisError : public Error {
 public:
  using Error::Error;
};

/// Resonance data is missing for a group required by the evolution assembly.
class IncompleteModelError : public Error {
 public:
  using Error::Error;
};

/// Configuration file violates the schema. Carries a field path.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& msg)
      : Error("config field '" + field + "': " + msg), field_path(field) {}
  std::string field_path;
};

/// File system failure while emitting an artifact.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qreson
