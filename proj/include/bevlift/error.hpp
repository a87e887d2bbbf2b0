// Copyright 2026 The bevlift Authors
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

#ifndef BEVLIFT__ERROR_HPP_
#define BEVLIFT__ERROR_HPP_

#include <stdexcept>
#include <string>

namespace bevlift
{

/// Error categories. The CLI maps them onto process exit codes.
enum class ErrorKind
{
  kInvalidArgument,
  kConfig,
  kData,
  kNumerical,
};

class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string & message)
  : std::runtime_error(message), kind_(kind)
  {
  }

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

/// Precondition or shape violation in a library call.
class InvalidArgument : public Error
{
public:
  explicit InvalidArgument(const std::string & message)
  : Error(ErrorKind::kInvalidArgument, message)
  {
  }
};

class ConfigError : public Error
{
public:
  explicit ConfigError(const std::string & message) : Error(ErrorKind::kConfig, message) {}
};

/// Malformed or unreadable input files.
class DataError : public Error
{
public:
  explicit DataError(const std::string & message) : Error(ErrorKind::kData, message) {}
};

/// Non-finite values detected at a pipeline stage boundary.
class NumericalError : public Error
{
public:
  explicit NumericalError(const std::string & message) : Error(ErrorKind::kNumerical, message)
  {
  }
};

}  // namespace bevlift

#endif  // BEVLIFT__ERROR_HPP_
