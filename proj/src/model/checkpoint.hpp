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

#include <filesystem>
#include <string>

#include "model/model.hpp"

namespace viskd::model {

inline constexpr int kCheckpointFormatVersion = 1;

/// Structured-text checkpoint: {format_version, stage, config, tensors}.
/// The positional table is stored under "encoder.positional".
std::string serialize_checkpoint(const Model& model);
Model parse_checkpoint(const std::string& text);

void save_checkpoint(const Model& model, const std::filesystem::path& path);
/// Missing file -> missing-artifact error; malformed -> schema error.
Model load_checkpoint(const std::filesystem::path& path);

}  // namespace viskd::model
