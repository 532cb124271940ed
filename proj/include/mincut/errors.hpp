// Copyright 2026 The mincut-pool Authors.
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mincut {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not conform.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A caller-supplied parameter is out of its valid range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Input data violates a structural requirement (negative weight, bad ids).
class DataError : public Error {
 public:
  using Error::Error;
};

// A caller broke an operation's precondition (non-scalar loss, asymmetric
// input to a symmetric solver, length mismatch).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Iterative method failed to converge or produced non-finite values.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Input is mathematically degenerate for the requested quantity (edgeless
// graph in the cut loss, empty cluster in the ratio trace).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace mincut
