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

#include <cstdint>
#include <string>

#include "data/prepared.hpp"
#include "model/model.hpp"
#include "training/losses.hpp"
#include "training/train_log.hpp"

namespace viskd::train {

struct TrainConfig {
  double lambda_cls = 1.0;
  double lambda_reg = 0.1;
  double lambda_kd = 0.05;
  double learning_rate = 1e-3;
  double weight_decay = 1e-4;
  std::size_t batch_size = 64;
  std::size_t max_epochs_pretrain = 20;
  std::size_t max_epochs_student = 30;
  std::size_t patience = 5;
  bool kd_enabled = true;
  bool mt_enabled = true;
  /// Student encoder starts from the MAE encoder instead of a fresh draw.
  bool warm_start = true;
  /// Trains the teacher heads (encoder fixed) before freezing.
  bool teacher_finetune = false;
  std::uint64_t seed = 42;

  void validate() const;
  LossWeights weights() const { return {lambda_cls, lambda_reg, lambda_kd}; }
  bool operator==(const TrainConfig&) const = default;
};

struct PretrainResult {
  model::Model model;  // stage mae, best validation reconstruction loss
  TrainLog log;
};

/// Masked reconstruction on the train split (labels unused), early-stopped
/// on validation reconstruction loss.
PretrainResult pretrain_mae(const data::PreparedData& data, const model::EncoderConfig& config,
                            const TrainConfig& train);

/// MAE encoder plus freshly drawn heads, frozen. With teacher_finetune the
/// heads are first fitted on the supervised loss without distillation.
model::Model build_teacher(const model::Model& mae, const TrainConfig& train,
                           const data::PreparedData* data = nullptr);

struct StudentResult {
  model::Model model;  // stage student, best validation AUROC
  TrainLog log;
  double best_val_auroc = 0.0;
  std::string teacher_fingerprint_before;
  std::string teacher_fingerprint_after;
};

/// Multitask student with optional distillation, early-stopped on
/// validation AUROC. `teacher` is required when kd_enabled and ignored
/// otherwise; `mae` is required when warm_start. `config` is used only for
/// a cold start.
StudentResult train_student(const data::PreparedData& data, const model::Model* teacher,
                            const model::Model* mae, const TrainConfig& train,
                            const model::EncoderConfig& config = {});

}  // namespace viskd::train
