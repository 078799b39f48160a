// Copyright 2026 The qsph Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qsph {

/// Failure categories raised by the core. The C API folds these into
/// configuration (exit 2) and numerical (exit 3) failures.
enum class ErrorKind {
  Capacity,
  Configuration,
  Shape,
  UnsupportedGate,
  Index,
  DegenerateEncoding,
  Contract,
  EmptyDataset,
  Io,
  UndefinedDirection,
  UndefinedLoss,
  UndefinedRelative,
  DegenerateStencil,
  TrainingDivergence,
  IntegrationFailure,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for failures of the numerics rather than of the inputs.
  bool is_numerical() const noexcept {
    switch (kind_) {
      case ErrorKind::UndefinedLoss:
      case ErrorKind::UndefinedRelative:
      case ErrorKind::DegenerateStencil:
      case ErrorKind::TrainingDivergence:
      case ErrorKind::IntegrationFailure:
        return true;
      default:
        return false;
    }
  }

 private:
  ErrorKind kind_;
};

class DegenerateStencilError : public Error {
 public:
  DegenerateStencilError(std::size_t particle, const std::string& what)
      : Error(ErrorKind::DegenerateStencil, what), particle_(particle) {}
  std::size_t particle() const noexcept { return particle_; }

 private:
  std::size_t particle_;
};

class IntegrationFailureError : public Error {
 public:
  IntegrationFailureError(std::size_t step, const std::string& what)
      : Error(ErrorKind::IntegrationFailure, what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool ok, ErrorKind kind, const std::string& what) {
  if (!ok) throw Error(kind, what);
}

}  // namespace qsph
