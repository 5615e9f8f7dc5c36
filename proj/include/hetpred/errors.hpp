// Copyright 2026 The hetpred Authors
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

namespace hetpred
{

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Incompatible tensor shapes.
class DimensionError : public Error
{
public:
  using Error::Error;
};

/// Row or element index outside its valid range.
class IndexError : public Error
{
public:
  using Error::Error;
};

/// Malformed input record; carries the 1-based line number.
class ParseError : public Error
{
public:
  ParseError(const std::string & message, std::size_t line)
  : Error("line " + std::to_string(line) + ": " + message), line_(line)
  {
  }
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/// Data that parsed but violates a domain invariant.
class ValidationError : public Error
{
public:
  using Error::Error;
};

/// Inconsistent or unusable configuration.
class ConfigError : public Error
{
public:
  using Error::Error;
};

/// NaN/Inf encountered in a loss, gradient or parameter.
class NumericError : public Error
{
public:
  using Error::Error;
};

/// Checkpoint does not match the expected parameter set or is corrupt.
class LoadError : public Error
{
public:
  using Error::Error;
};

/// Requested entity (scene id, parameter path) does not exist.
class LookupError : public Error
{
public:
  using Error::Error;
};

/// Misuse of the autodiff tape (double backward, non-scalar root).
class TapeError : public Error
{
public:
  using Error::Error;
};

}  // namespace hetpred
