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

#include "pipeline/run_config.hpp"

namespace viskd::pipeline {

/// Artifact locations under the output directory.
struct Layout {
  std::filesystem::path out;

  std::filesystem::path prepared() const { return out / "prepared"; }
  std::filesystem::path mae() const { return out / "mae"; }
  std::filesystem::path teacher() const { return out / "teacher"; }
  std::filesystem::path student() const { return out / "student"; }
  std::filesystem::path evaluation() const { return out / "evaluation"; }
  std::filesystem::path attribution() const { return out / "attribution"; }
  std::filesystem::path ablation() const { return out / "ablation"; }
  static std::filesystem::path checkpoint(const std::filesystem::path& dir) { return dir / "checkpoint.json"; }
};

/// Each stage reads its inputs from the layout, writes its artifacts
/// atomically, and records the resolved config as run_config.json in every
/// directory it writes. A missing input is a missing-artifact error naming
/// the file.
void run_generate(const RunConfig& config);
void run_preprocess(const RunConfig& config);
void run_pretrain(const RunConfig& config);
void run_train(const RunConfig& config);
void run_evaluate(const RunConfig& config);
void run_explain(const RunConfig& config);
void run_ablate(const RunConfig& config);

}  // namespace viskd::pipeline
