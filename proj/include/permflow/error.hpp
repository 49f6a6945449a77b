// Copyright 2026 The permflow Authors
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

namespace permflow {

// Base of every error thrown by the library. The CLI maps SizeLimitError to
// exit code 3 and everything else to exit code 2.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InvalidSizeError : public Error {
  public:
    using Error::Error;
};

class InvalidPermutationError : public Error {
  public:
    using Error::Error;
};

// Argument outside the mathematical domain of an operation (negative time,
// nonpositive epsilon, i == j, dimension mismatch, ...).
class DomainError : public Error {
  public:
    using Error::Error;
};

// Result does not fit the integer width used for exact arithmetic.
class RangeError : public Error {
  public:
    using Error::Error;
};

// Input larger than an enumeration or search is allowed to handle.
class SizeLimitError : public Error {
  public:
    using Error::Error;
};

class StepSizeError : public Error {
  public:
    using Error::Error;
};

// Malformed decision tree.
class StructureError : public Error {
  public:
    using Error::Error;
};

class ParseError : public Error {
  public:
    using Error::Error;
};

}  // namespace permflow
