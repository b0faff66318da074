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

#include "training/ablation.hpp"

#include "common/log.hpp"

namespace viskd::train {

std::vector<std::pair<std::string, TrainConfig>> ablation_arms(const TrainConfig& base) {
  TrainConfig baseline = base, no_kd = base, no_mt = base;
  baseline.kd_enabled = true;
  baseline.mt_enabled = true;
  no_kd.kd_enabled = false;
  no_kd.mt_enabled = true;
  no_mt.kd_enabled = true;
  no_mt.mt_enabled = false;
  return {{"baseline", baseline}, {"no_kd", no_kd}, {"no_mt", no_mt}};
}

AblationResult run_ablation(const data::PreparedData& data, const model::Model& mae,
                            const TrainConfig& base, const eval::EvaluationOptions& evaluation) {
  base.validate();
  evaluation.validate();
  AblationResult out;
  out.teacher = build_teacher(mae, base, &data);
  out.teacher_fingerprint = model::parameter_fingerprint(out.teacher);
  for (auto& [name, config] : ablation_arms(base)) {
    log::info("ablation arm " + name);
    AblationArm arm;
    arm.name = name;
    arm.config = config;
    arm.student = train_student(data, &out.teacher, &mae, config, mae.config);
    arm.evaluation = eval::evaluate_model(arm.student.model, data, evaluation, config.seed, name,
                                          config.mt_enabled);
    out.arms.push_back(std::move(arm));
  }
  return out;
}

std::string AblationResult::table_csv() const {
  std::string out = eval::report_csv_header();
  for (const AblationArm& arm : arms) out += eval::report_csv_row(arm.evaluation.report);
  return out;
}

}  // namespace viskd::train
