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

#include <array>
#include <span>

#include "model/mask.hpp"
#include "numerics/tape.hpp"

namespace viskd::train {

/// Reconstruction error over masked cells only.
num::Var mae_loss(num::Var reconstruction, const num::Tensor& target, const model::MaskPlan& mask);
double mae_loss(const num::Tensor& reconstruction, const num::Tensor& target,
                const model::MaskPlan& mask);

/// Batch mean of the squared distance between softmax distributions.
num::Var kd_loss(num::Var student_logits, const num::Tensor& teacher_logits);
double kd_loss(const num::Tensor& student_logits, const num::Tensor& teacher_logits);

struct LossWeights {
  double cls = 1.0;
  double reg = 0.1;
  double kd = 0.05;
};

/// Unweighted component values; absent terms are 0.
struct LossComponents {
  double ce = 0.0;
  double mse = 0.0;
  double kd = 0.0;
  double total = 0.0;
};

struct StudentLoss {
  num::Var total;
  LossComponents components;
};

/// lambda_cls * CE + lambda_reg * MSE + lambda_kd * KD. `reg_pred` is used
/// only when `use_reg`; `teacher_logits` only when `use_kd`, where a null
/// teacher is a config error.
StudentLoss student_total_loss(num::Var cls_logits, std::span<const int> labels,
                               const num::Var* reg_pred, const num::Tensor* reg_target,
                               const num::Tensor* teacher_logits,
                               const std::array<double, 2>& class_weights,
                               const LossWeights& weights, bool use_reg, bool use_kd);

}  // namespace viskd::train
