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

#include "training/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "common/error.hpp"
#include "common/format.hpp"
#include "common/log.hpp"
#include "evaluation/metrics.hpp"
#include "numerics/adamw.hpp"
#include "numerics/losses.hpp"

namespace viskd::train {
namespace {

using Clock = std::chrono::steady_clock;
using Filter = std::function<bool(const std::string&)>;

bool starts_with(const std::string& s, const char* prefix) { return s.rfind(prefix, 0) == 0; }

num::AdamWState make_optimizer(const TrainConfig& t) {
  num::AdamWOptions o;
  o.learning_rate = t.learning_rate;
  o.weight_decay = t.weight_decay;
  o.validate();
  return num::AdamWState{o, {}, {}, 0};
}

std::vector<std::size_t> shuffled(std::vector<std::size_t> rows, std::uint64_t seed) {
  Rng rng(seed);
  std::shuffle(rows.begin(), rows.end(), rng);
  return rows;
}

std::vector<std::size_t> slice_rows(const std::vector<std::size_t>& rows, std::size_t begin,
                                    std::size_t end) {
  return {rows.begin() + static_cast<std::ptrdiff_t>(begin), rows.begin() + static_cast<std::ptrdiff_t>(end)};
}

void check_finite(double loss, const char* stage, std::size_t epoch, std::size_t batch) {
  if (!std::isfinite(loss)) {
    throw_divergence(std::string(stage) + ": non-finite loss at epoch " + std::to_string(epoch) +
                     ", batch " + std::to_string(batch));
  }
}

void step(model::Model& m, const model::Bound& bound, num::AdamWState& opt, const char* stage,
          std::size_t epoch) {
  num::NamedTensors grads = bound.gradients();
  for (const auto& [name, g] : grads) {
    if (!g.all_finite()) {
      throw_divergence(std::string(stage) + ": non-finite gradient for " + name + " at epoch " +
                       std::to_string(epoch));
    }
  }
  num::adamw_step(m.params, grads, opt);
}

void require_validation(const data::PreparedData& data, const char* stage) {
  if (data.split.train.empty()) throw_data(ErrorReason::kValidation, std::string(stage) + ": empty train split");
  if (data.split.validation.empty()) {
    throw_data(ErrorReason::kValidation, std::string(stage) + ": empty validation split");
  }
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct SupervisedSetup {
  const char* stage;
  Filter trainable;
  const num::Tensor* teacher_logits;  // [N, 2] over all rows, or null
  bool use_reg;
  bool use_kd;
};

struct SupervisedResult {
  model::Model model;
  TrainLog log;
  double best_val_auroc = 0.0;
};

SupervisedResult fit_supervised(model::Model m, const data::PreparedData& data,
                                const TrainConfig& t, const SupervisedSetup& setup) {
  require_validation(data, setup.stage);
  const LossWeights w = t.weights();
  num::AdamWState opt = make_optimizer(t);
  const auto& split = data.split;
  const std::vector<int> val_labels = data.labels_at(split.validation);
  const num::Tensor val_targets = num::gather_rows(data.score_targets, split.validation);
  num::Tensor val_teacher;
  if (setup.use_kd) val_teacher = num::gather_rows(*setup.teacher_logits, split.validation);

  SupervisedResult out;
  out.log.stage = setup.stage;
  out.log.components = {"ce"};
  if (setup.use_reg) out.log.components.push_back("mse");
  if (setup.use_kd) out.log.components.push_back("kd");

  double best = -std::numeric_limits<double>::infinity();
  num::NamedTensors best_params = m.params;
  std::size_t stale = 0;
  const std::string stage(setup.stage);
  for (std::size_t epoch = 1; epoch <= t.max_epochs_student; ++epoch) {
    const auto start = Clock::now();
    const auto order = shuffled(split.train, derive_seed(t.seed, "shuffle/" + stage, epoch));
    Rng dropout_rng(derive_seed(t.seed, "dropout/" + stage, epoch));
    double loss_sum = 0.0;
    std::vector<double> comp_sum(out.log.components.size(), 0.0);
    for (std::size_t b = 0, batch = 0; b < order.size(); b += t.batch_size, ++batch) {
      const auto rows = slice_rows(order, b, std::min(order.size(), b + t.batch_size));
      const std::vector<int> labels = data.labels_at(rows);
      const num::Tensor reg_target = num::gather_rows(data.score_targets, rows);
      num::Tensor teacher;
      if (setup.use_kd) teacher = num::gather_rows(*setup.teacher_logits, rows);
      num::Tape tape;
      model::Bound p(tape, m, true, setup.trainable);
      const model::ForwardMode mode{true, &dropout_rng};
      num::Var latent = model::encoder_forward(p, num::gather_rows(data.vis, rows), nullptr, mode);
      num::Var cls = model::cls_embedding(latent);
      num::Var logits = model::classify_head(p, cls, num::gather_rows(data.static_full, rows), mode);
      num::Var reg;
      if (setup.use_reg) {
        reg = model::regress_head(p, cls, num::gather_rows(data.static_scorefree, rows), mode);
      }
      StudentLoss loss = student_total_loss(logits, labels, setup.use_reg ? &reg : nullptr, &reg_target,
                                            setup.use_kd ? &teacher : nullptr, data.class_weights, w,
                                            setup.use_reg, setup.use_kd);
      check_finite(loss.components.total, setup.stage, epoch, batch);
      tape.backward(loss.total);
      step(m, p, opt, setup.stage, epoch);
      const double n = static_cast<double>(rows.size());
      loss_sum += loss.components.total * n;
      std::size_t c = 0;
      comp_sum[c++] += loss.components.ce * n;
      if (setup.use_reg) comp_sum[c++] += loss.components.mse * n;
      if (setup.use_kd) comp_sum[c++] += loss.components.kd * n;
    }

    const model::Predictions val = model::predict(
        m, num::gather_rows(data.vis, split.validation), num::gather_rows(data.static_full, split.validation),
        num::gather_rows(data.static_scorefree, split.validation), t.batch_size);
    double val_loss = w.cls * num::weighted_cross_entropy(val.logits, val_labels, data.class_weights);
    if (setup.use_reg) val_loss += w.reg * num::mse(val.regression, val_targets);
    if (setup.use_kd) val_loss += w.kd * kd_loss(val.logits, val_teacher);
    check_finite(val_loss, setup.stage, epoch, 0);
    const double val_auroc = eval::auroc(val.prob_positive, val_labels);

    EpochRecord rec;
    rec.epoch = epoch;
    const double n_train = static_cast<double>(order.size());
    rec.train_loss = loss_sum / n_train;
    rec.val_loss = val_loss;
    rec.val_auroc = val_auroc;
    for (double s : comp_sum) rec.components.push_back(s / n_train);
    rec.wall_seconds = seconds_since(start);
    out.log.epochs.push_back(rec);
    log::info(stage + " epoch " + std::to_string(epoch) + ": train_loss " + fmt::number(rec.train_loss) +
              ", val_loss " + fmt::number(val_loss) + ", val_auroc " + fmt::number(val_auroc));

    if (val_auroc > best) {
      best = val_auroc;
      best_params = m.params;
      out.log.best_epoch = epoch;
      stale = 0;
    } else if (++stale >= t.patience) {
      out.log.stopped_early = true;
      break;
    }
  }
  m.params = std::move(best_params);
  out.model = std::move(m);
  out.best_val_auroc = best;
  return out;
}

}  // namespace

void TrainConfig::validate() const {
  if (lambda_cls < 0.0 || lambda_reg < 0.0 || lambda_kd < 0.0) {
    throw_config("training: loss weights must be nonnegative");
  }
  if (patience < 1) throw_config("training: patience must be at least 1");
  if (batch_size < 1) throw_config("training: batch_size must be at least 1");
  if (max_epochs_pretrain < 1 || max_epochs_student < 1) {
    throw_config("training: epoch budgets must be at least 1");
  }
  num::AdamWOptions o;
  o.learning_rate = learning_rate;
  o.weight_decay = weight_decay;
  o.validate();
}

PretrainResult pretrain_mae(const data::PreparedData& data, const model::EncoderConfig& config,
                            const TrainConfig& t) {
  t.validate();
  config.validate();
  require_validation(data, "pretrain");
  model::Model m = model::init_model(config, model::Stage::kMae, derive_seed(t.seed, "init/mae"));
  num::AdamWState opt = make_optimizer(t);
  const Filter trainable = [](const std::string& n) {
    return starts_with(n, "encoder.") || starts_with(n, "decoder.");
  };
  const auto& split = data.split;
  const std::uint64_t val_mask_seed = derive_seed(t.seed, "mask/validation");

  PretrainResult out;
  out.log.stage = "pretrain";
  out.log.components = {"reconstruction"};
  double best = std::numeric_limits<double>::infinity();
  num::NamedTensors best_params = m.params;
  std::size_t stale = 0;
  for (std::size_t epoch = 1; epoch <= t.max_epochs_pretrain; ++epoch) {
    const auto start = Clock::now();
    const auto order = shuffled(split.train, derive_seed(t.seed, "shuffle/pretrain", epoch));
    Rng dropout_rng(derive_seed(t.seed, "dropout/pretrain", epoch));
    const std::uint64_t mask_seed = derive_seed(t.seed, "mask/train", epoch);
    double loss_sum = 0.0;
    for (std::size_t b = 0, batch = 0; b < order.size(); b += t.batch_size, ++batch) {
      const auto rows = slice_rows(order, b, std::min(order.size(), b + t.batch_size));
      const num::Tensor x = num::gather_rows(data.vis, rows);
      const model::MaskPlan mask = model::make_mask_for(rows, config, mask_seed);
      num::Tape tape;
      model::Bound p(tape, m, true, trainable);
      num::Var latent = model::encoder_forward(p, x, &mask, {true, &dropout_rng});
      num::Var loss = mae_loss(model::decoder_forward(p, latent), x, mask);
      const double value = loss.value().item();
      check_finite(value, "pretrain", epoch, batch);
      tape.backward(loss);
      step(m, p, opt, "pretrain", epoch);
      loss_sum += value * static_cast<double>(rows.size());
    }

    double val_sum = 0.0;
    for (std::size_t b = 0; b < split.validation.size(); b += t.batch_size) {
      const auto rows = slice_rows(split.validation, b, std::min(split.validation.size(), b + t.batch_size));
      const num::Tensor x = num::gather_rows(data.vis, rows);
      const model::MaskPlan mask = model::make_mask_for(rows, config, val_mask_seed);
      num::Tape tape;
      model::Bound p(tape, m, false);
      num::Var latent = model::encoder_forward(p, x, &mask, {});
      val_sum += mae_loss(model::decoder_forward(p, latent).value(), x, mask) *
                 static_cast<double>(rows.size());
    }
    const double val_loss = val_sum / static_cast<double>(split.validation.size());
    check_finite(val_loss, "pretrain", epoch, 0);

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(order.size());
    rec.val_loss = val_loss;
    rec.components = {rec.train_loss};
    rec.wall_seconds = seconds_since(start);
    out.log.epochs.push_back(rec);
    log::info("pretrain epoch " + std::to_string(epoch) + ": train_loss " + fmt::number(rec.train_loss) +
              ", val_loss " + fmt::number(val_loss));

    if (val_loss < best) {
      best = val_loss;
      best_params = m.params;
      out.log.best_epoch = epoch;
      stale = 0;
    } else if (++stale >= t.patience) {
      out.log.stopped_early = true;
      break;
    }
  }
  m.params = std::move(best_params);
  out.model = std::move(m);
  return out;
}

model::Model build_teacher(const model::Model& mae, const TrainConfig& t, const data::PreparedData* data) {
  t.validate();
  if (mae.stage != model::Stage::kMae) {
    throw_contract(std::string("teacher must be built from an mae checkpoint, got stage ") +
                   model::to_string(mae.stage));
  }
  model::validate_shapes(mae);
  model::Model teacher = mae;
  teacher.stage = model::Stage::kTeacher;
  const std::uint64_t head_seed = derive_seed(t.seed, "init/teacher");
  model::reinit_parameters(teacher, "cls_head.", head_seed);
  model::reinit_parameters(teacher, "reg_head.", head_seed);
  if (t.teacher_finetune) {
    if (!data) throw_contract("teacher fine-tuning needs the prepared cohort");
    const SupervisedSetup setup{"teacher", [](const std::string& n) {
                                  return starts_with(n, "cls_head.") || starts_with(n, "reg_head.");
                                },
                                nullptr, t.mt_enabled, false};
    teacher = fit_supervised(std::move(teacher), *data, t, setup).model;
  }
  teacher.frozen = true;
  return teacher;
}

StudentResult train_student(const data::PreparedData& data, const model::Model* teacher,
                            const model::Model* mae, const TrainConfig& t,
                            const model::EncoderConfig& config) {
  t.validate();
  if (t.kd_enabled) {
    if (!teacher) throw_config("knowledge distillation is enabled but no teacher is loaded");
    if (!teacher->frozen || teacher->stage != model::Stage::kTeacher) {
      throw_contract("the distillation teacher must be a frozen teacher-stage model");
    }
  }
  model::Model student;
  if (t.warm_start) {
    if (!mae) throw_config("warm start requested but no MAE checkpoint was provided");
    if (mae->stage != model::Stage::kMae) throw_contract("warm start needs an mae-stage checkpoint");
    student = model::init_model(mae->config, model::Stage::kStudent, derive_seed(t.seed, "init/student"));
    for (auto& [name, tensor] : student.params) {
      if (starts_with(name, "encoder.")) tensor = mae->params.at(name);
    }
  } else {
    student = model::init_model(config, model::Stage::kStudent, derive_seed(t.seed, "init/student"));
  }

  StudentResult out;
  num::Tensor teacher_logits;
  if (t.kd_enabled) {
    if (!(teacher->config == student.config)) throw_contract("teacher and student configs differ");
    out.teacher_fingerprint_before = model::parameter_fingerprint(*teacher);
    teacher_logits = model::predict(*teacher, data.vis, data.static_full, data.static_scorefree,
                                    t.batch_size).logits;
  }
  const SupervisedSetup setup{"student",
                              [](const std::string& n) { return !starts_with(n, "decoder."); },
                              t.kd_enabled ? &teacher_logits : nullptr, t.mt_enabled, t.kd_enabled};
  SupervisedResult fit = fit_supervised(std::move(student), data, t, setup);
  if (t.kd_enabled) {
    out.teacher_fingerprint_after = model::parameter_fingerprint(*teacher);
    if (out.teacher_fingerprint_after != out.teacher_fingerprint_before) {
      throw Error(ErrorKind::kContract, ErrorReason::kFreezeViolation,
                  "teacher parameters changed during student training");
    }
  }
  out.model = std::move(fit.model);
  out.log = std::move(fit.log);
  out.best_val_auroc = fit.best_val_auroc;
  return out;
}

}  // namespace viskd::train
