/*
 * Copyright (c) 2026 The viskd Authors
 *
 * Licensed under the Apache License, Version 2.0;
 * You may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an 'AS IS' BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace viskd {

/// Failure categories. The integer values of the first five match the CLI
/// exit codes.
enum class ErrorKind {
  kInternal = 1,
  kConfig = 2,
  kData = 3,
  kDivergence = 4,
  kMissingArtifact = 5,
  kContract = 6,
};

/// Finer-grained reason, used by tests to tell apart errors that share an
/// exit code.
enum class ErrorReason {
  kGeneric,
  kNumericInput,
  kLabel,
  kDegenerateMask,
  kValidation,
  kCannotFit,
  kStratification,
  kDegenerateClass,
  kUndefinedMetric,
  kSchema,
  kFreezeViolation,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, ErrorReason reason, const std::string& what)
      : std::runtime_error(what), kind_(kind), reason_(reason) {}

  ErrorKind kind() const noexcept { return kind_; }
  ErrorReason reason() const noexcept { return reason_; }

 private:
  ErrorKind kind_;
  ErrorReason reason_;
};

[[noreturn]] void throw_contract(const std::string& what);
[[noreturn]] void throw_config(const std::string& what);
[[noreturn]] void throw_data(ErrorReason reason, const std::string& what);
[[noreturn]] void throw_numeric_input(const std::string& what);
[[noreturn]] void throw_divergence(const std::string& what);
[[noreturn]] void throw_missing_artifact(const std::string& path);

const char* to_string(ErrorKind kind);

}  // namespace viskd
