// Copyright 2026 The qstance Authors.
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

#ifndef QSTANCE_UTIL_ERRORS_H_
#define QSTANCE_UTIL_ERRORS_H_

#include <stdexcept>
#include <string>

namespace qstance {

// Process exit codes shared by every command.
enum class ExitCode : int {
  kOk = 0,
  kConfig = 2,
  kProvider = 3,
  kData = 4,
};

// Base for all errors raised by the toolkit. Each subclass maps onto one
// exit code so the CLI can report a machine-readable summary.
class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string &kind, const std::string &message)
      : std::runtime_error(message), code_(code), kind_(kind) {}

  ExitCode code() const { return code_; }
  const std::string &kind() const { return kind_; }

 private:
  ExitCode code_;
  std::string kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string &message)
      : Error(ExitCode::kConfig, "config", message) {}
};

class ProviderError : public Error {
 public:
  explicit ProviderError(const std::string &message)
      : Error(ExitCode::kProvider, "provider", message) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string &message)
      : Error(ExitCode::kData, "data", message) {}
};

}  // namespace qstance

#endif  // QSTANCE_UTIL_ERRORS_H_
