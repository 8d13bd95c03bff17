// Copyright 2026 The eigstab Authors.
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

#ifndef EIGSTAB_ERRORS_HPP_
#define EIGSTAB_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace eigstab {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &what) : std::runtime_error(what) {}
};

// Jacobi sweeps hit the iteration cap without converging. Callers may
// regularize the input and retry once.
class EigensolverFailure : public Error {
 public:
  using Error::Error;
};

// A power-iteration step met a vector in the null space (||Mv|| == 0).
class ZeroIterate : public Error {
 public:
  using Error::Error;
};

class ZeroVector : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

// The truncated eigendecomposition of a batch covariance kept no eigenpair.
class DegenerateBatch : public Error {
 public:
  using Error::Error;
};

// A finite-difference probe produced a non-finite loss value.
class OracleFailure : public Error {
 public:
  using Error::Error;
};

// Invalid benchmark or CLI configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed matrix or layer-state text.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace eigstab

#endif  // EIGSTAB_ERRORS_HPP_
