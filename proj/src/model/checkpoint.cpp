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

#include "model/checkpoint.hpp"

#include <json.hpp>

#include "common/error.hpp"
#include "common/io.hpp"
#include "numerics/tensor_io.hpp"

namespace viskd::model {
namespace {
constexpr const char* kPositionalName = "encoder.positional";
}  // namespace

std::string serialize_checkpoint(const Model& model) {
  validate_shapes(model);
  nlohmann::ordered_json j;
  j["format_version"] = kCheckpointFormatVersion;
  j["stage"] = to_string(model.stage);
  j["config"] = to_json(model.config);
  nlohmann::ordered_json tensors = nlohmann::ordered_json::object();
  for (const auto& [name, t] : model.params) tensors[name] = num::tensor_to_json(t);
  tensors[kPositionalName] = num::tensor_to_json(model.positional);
  j["tensors"] = std::move(tensors);
  return j.dump(1) + "\n";
}

Model parse_checkpoint(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw_data(ErrorReason::kSchema, std::string("checkpoint is not valid JSON: ") + e.what());
  }
  Model m;
  try {
    const int version = j.at("format_version").get<int>();
    if (version != kCheckpointFormatVersion) {
      throw_data(ErrorReason::kSchema,
                 "unsupported checkpoint format_version " + std::to_string(version));
    }
    m.stage = stage_from_string(j.at("stage").get<std::string>());
    m.config = encoder_config_from_json(j.at("config"));
    m.config.validate();
    for (const auto& [name, value] : j.at("tensors").items()) {
      if (name == kPositionalName) {
        m.positional = num::tensor_from_json(value);
      } else {
        m.params.emplace(name, num::tensor_from_json(value));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw_data(ErrorReason::kSchema, std::string("checkpoint: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kData) throw;
    throw_data(ErrorReason::kSchema, std::string("checkpoint: ") + e.what());
  }
  m.frozen = m.stage == Stage::kTeacher;
  try {
    validate_shapes(m);
  } catch (const Error& e) {
    throw_data(ErrorReason::kSchema, std::string("checkpoint: ") + e.what());
  }
  return m;
}

void save_checkpoint(const Model& model, const std::filesystem::path& path) {
  io::write_file_atomic(path, serialize_checkpoint(model));
}

Model load_checkpoint(const std::filesystem::path& path) {
  return parse_checkpoint(io::read_file(path));
}

}  // namespace viskd::model
