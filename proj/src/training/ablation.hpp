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

#include <string>
#include <vector>

#include "evaluation/report.hpp"
#include "training/trainer.hpp"

namespace viskd::train {

struct AblationArm {
  std::string name;  // baseline | no_kd | no_mt
  TrainConfig config;
  StudentResult student;
  eval::EvaluationResult evaluation;
};

struct AblationResult {
  model::Model teacher;
  std::string teacher_fingerprint;
  std::vector<AblationArm> arms;

  /// Report header plus one row per arm.
  std::string table_csv() const;
};

/// The three standard arms over one shared split, teacher and seed:
/// baseline (kd, mt), no_kd (mt only), no_mt (kd only).
std::vector<std::pair<std::string, TrainConfig>> ablation_arms(const TrainConfig& base);

AblationResult run_ablation(const data::PreparedData& data, const model::Model& mae,
                            const TrainConfig& base, const eval::EvaluationOptions& evaluation);

}  // namespace viskd::train
