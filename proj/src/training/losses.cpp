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

#include "training/losses.hpp"

#include "common/error.hpp"
#include "numerics/losses.hpp"
#include "numerics/ops.hpp"

namespace viskd::train {
namespace {

void check_mask(const num::Shape& shape, const model::MaskPlan& mask) {
  if (shape.size() != 3 || shape[0] != mask.batch || shape[1] != mask.seq_len ||
      shape[2] != mask.n_features) {
    throw_contract("mae_loss: reconstruction " + num::shape_to_string(shape) +
                   " does not match the mask plan");
  }
}

void check_logits(const num::Shape& student, const num::Shape& teacher) {
  if (student != teacher || student.size() != 2 || student[1] != 2) {
    throw_contract("kd_loss: logits must both be [B, 2], got " + num::shape_to_string(student) +
                   " and " + num::shape_to_string(teacher));
  }
}

}  // namespace

num::Var mae_loss(num::Var reconstruction, const num::Tensor& target, const model::MaskPlan& mask) {
  check_mask(reconstruction.shape(), mask);
  return num::mse(reconstruction, reconstruction.tape()->constant(target), mask.cells);
}

double mae_loss(const num::Tensor& reconstruction, const num::Tensor& target,
                const model::MaskPlan& mask) {
  check_mask(reconstruction.shape(), mask);
  return num::mse(reconstruction, target, mask.cells);
}

num::Var kd_loss(num::Var student_logits, const num::Tensor& teacher_logits) {
  check_logits(student_logits.shape(), teacher_logits.shape());
  num::Tape& tape = *student_logits.tape();
  num::Var diff = num::sub(num::softmax(student_logits),
                           tape.constant(num::softmax_rows(teacher_logits)));
  return num::scale(num::sum(num::square(diff)), 1.0 / static_cast<double>(teacher_logits.dim(0)));
}

double kd_loss(const num::Tensor& student_logits, const num::Tensor& teacher_logits) {
  check_logits(student_logits.shape(), teacher_logits.shape());
  const num::Tensor ps = num::softmax_rows(student_logits);
  const num::Tensor pt = num::softmax_rows(teacher_logits);
  double total = 0.0;
  for (std::size_t i = 0; i < ps.numel(); ++i) total += (ps[i] - pt[i]) * (ps[i] - pt[i]);
  return total / static_cast<double>(ps.dim(0));
}

StudentLoss student_total_loss(num::Var cls_logits, std::span<const int> labels,
                               const num::Var* reg_pred, const num::Tensor* reg_target,
                               const num::Tensor* teacher_logits,
                               const std::array<double, 2>& class_weights,
                               const LossWeights& weights, bool use_reg, bool use_kd) {
  if (weights.cls < 0.0 || weights.reg < 0.0 || weights.kd < 0.0) {
    throw_config("loss weights must be nonnegative");
  }
  num::Tape& tape = *cls_logits.tape();
  StudentLoss out;
  num::Var ce = num::weighted_cross_entropy(cls_logits, labels, class_weights);
  out.components.ce = ce.value().item();
  num::Var total = num::scale(ce, weights.cls);
  if (use_reg) {
    if (!reg_pred || !reg_target) throw_contract("multitask loss needs predictions and targets");
    num::Var m = num::mse(*reg_pred, tape.constant(*reg_target));
    out.components.mse = m.value().item();
    total = num::add(total, num::scale(m, weights.reg));
  }
  if (use_kd) {
    if (!teacher_logits) throw_config("knowledge distillation is enabled but no teacher is loaded");
    num::Var kd = kd_loss(cls_logits, *teacher_logits);
    out.components.kd = kd.value().item();
    total = num::add(total, num::scale(kd, weights.kd));
  }
  out.total = total;
  out.components.total = total.value().item();
  return out;
}

}  // namespace viskd::train
