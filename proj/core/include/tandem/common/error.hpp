// core/include/tandem/common/error.hpp

// Copyright 2026  Tandem Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef TANDEM_COMMON_ERROR_HPP
#define TANDEM_COMMON_ERROR_HPP

#include <stdexcept>
#include <string>

namespace tandem {

// Base for all library errors. Subclasses mark the failure category so the
// CLI can map them onto its exit-code contract.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Signal content violates a precondition (empty, non-finite, ...).
class InvalidSignal : public Error {
 public:
  using Error::Error;
};

// A configuration object is internally inconsistent.
class InvalidConfig : public Error {
 public:
  using Error::Error;
};

// An argument is shaped or typed wrongly for the operation.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Mathematically degenerate input (zero-energy noise, all-zero batch, ...).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

// A CTC target that no alignment of the given length can produce.
class InfeasibleTarget : public Error {
 public:
  using Error::Error;
};

// Experiment- or file-level configuration problems (exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Unreadable or inconsistent data on disk (exit code 3).
class DataError : public Error {
 public:
  using Error::Error;
};

// Non-finite loss during training (exit code 4).
class TrainingDiverged : public Error {
 public:
  using Error::Error;
};

}  // namespace tandem

#endif  // TANDEM_COMMON_ERROR_HPP
