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

#include "common/error.hpp"

namespace viskd {

void throw_contract(const std::string& what) {
  throw Error(ErrorKind::kContract, ErrorReason::kGeneric, what);
}

void throw_config(const std::string& what) {
  throw Error(ErrorKind::kConfig, ErrorReason::kGeneric, what);
}

void throw_data(ErrorReason reason, const std::string& what) {
  throw Error(ErrorKind::kData, reason, what);
}

void throw_numeric_input(const std::string& what) {
  throw Error(ErrorKind::kContract, ErrorReason::kNumericInput, what);
}

void throw_divergence(const std::string& what) {
  throw Error(ErrorKind::kDivergence, ErrorReason::kGeneric, what);
}

void throw_missing_artifact(const std::string& path) {
  throw Error(ErrorKind::kMissingArtifact, ErrorReason::kGeneric,
              "missing artifact: " + path);
}

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInternal: return "internal";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kData: return "data";
    case ErrorKind::kDivergence: return "divergence";
    case ErrorKind::kMissingArtifact: return "missing-artifact";
    case ErrorKind::kContract: return "contract";
  }
  return "unknown";
}

}  // namespace viskd
