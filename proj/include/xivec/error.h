// include/xivec/error.h

// Copyright 2026  Xivec Authors

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

#ifndef XIVEC_ERROR_H_
#define XIVEC_ERROR_H_

#include <stdexcept>
#include <string>

namespace xivec {

// Base class of everything thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

// Tensor shapes do not match the operation contract.
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string &msg) : Error(msg) {}
};

// A sequence or pool with no elements where at least one is required.
class EmptyInputError : public Error {
 public:
  explicit EmptyInputError(const std::string &msg) : Error(msg) {}
};

// NaN/Inf produced by a primitive or its gradient; message names the op.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string &msg) : Error(msg) {}
};

// Malformed binary container (bad magic, truncation, shape mismatch).
class FormatError : public Error {
 public:
  explicit FormatError(const std::string &msg) : Error(msg) {}
};

// Malformed text input (trial lists, config files); message carries the line.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string &msg) : Error(msg) {}
};

// Invalid or inconsistent configuration, including missing files.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string &msg) : Error(msg) {}
};

// Detection metrics on a trial set that cannot support them.
class MetricError : public Error {
 public:
  explicit MetricError(const std::string &msg) : Error(msg) {}
};

}  // namespace xivec

#endif  // XIVEC_ERROR_H_
