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

#include "pipeline/stages.hpp"

#include "attribution/shapley.hpp"
#include "common/error.hpp"
#include "common/format.hpp"
#include "common/io.hpp"
#include "common/log.hpp"
#include "data/prepared.hpp"
#include "model/checkpoint.hpp"
#include "training/ablation.hpp"

namespace viskd::pipeline {
namespace {

namespace fs = std::filesystem;

void write_config(const RunConfig& c, const fs::path& dir) {
  io::write_file_atomic(dir / "run_config.json", serialize_run_config(c));
}

void write_log(const train::TrainLog& log, const fs::path& dir) {
  io::write_file_atomic(dir / "train_log.csv", log.to_csv());
  io::write_file_atomic(dir / "train_timing.csv", log.timing_csv());
}

data::PreparedData load_inputs(const Layout& l) { return data::load_prepared(l.prepared()); }

model::Model load_stage(const fs::path& dir, model::Stage expected) {
  model::Model m = model::load_checkpoint(Layout::checkpoint(dir));
  if (m.stage != expected) {
    throw_contract(Layout::checkpoint(dir).string() + " holds a " + model::to_string(m.stage) +
                   " checkpoint, expected " + model::to_string(expected));
  }
  return m;
}

void write_evaluation(const eval::EvaluationResult& r, const data::PreparedData& data, const fs::path& dir) {
  io::write_file_atomic(dir / "metrics.json", eval::report_to_json(r.report).dump(2) + "\n");
  io::write_file_atomic(dir / "metrics.csv", eval::report_csv_header() + eval::report_csv_row(r.report));
  io::write_file_atomic(dir / "roc.csv", eval::roc_to_csv(r.roc));
  std::string preds = "patient_id,label,score\n";
  for (std::size_t i = 0; i < data.split.test.size(); ++i) {
    const std::size_t row = data.split.test[i];
    preds += data.patient_ids[row] + "," + std::to_string(data.labels[row]) + "," + fmt::number(r.test_scores[i]) + "\n";
  }
  io::write_file_atomic(dir / "predictions.csv", preds);
}

}  // namespace

void run_generate(const RunConfig& c) {
  const auto records = data::generate_synthetic_cohort(c.generator());
  data::save_cohort(c.cohort_path(), records);
  write_config(c, Layout{c.paths.out}.out);
  log::info("wrote " + std::to_string(records.size()) + " patients to " + c.cohort_path().string());
}

void run_preprocess(const RunConfig& c) {
  const Layout l{c.paths.out};
  const auto records = data::load_cohort(c.cohort_path());
  const data::PreparedData prepared = data::prepare_cohort(records, c.data.split_fractions, c.seed);
  data::save_prepared(prepared, l.prepared());
  write_config(c, l.prepared());
  log::info("prepared " + std::to_string(prepared.size()) + " patients into " + l.prepared().string());
}

void run_pretrain(const RunConfig& c) {
  const Layout l{c.paths.out};
  const data::PreparedData prepared = load_inputs(l);
  const train::PretrainResult r = train::pretrain_mae(prepared, c.model, c.training);
  model::save_checkpoint(r.model, Layout::checkpoint(l.mae()));
  write_log(r.log, l.mae());
  write_config(c, l.mae());
}

void run_train(const RunConfig& c) {
  const Layout l{c.paths.out};
  const data::PreparedData prepared = load_inputs(l);
  const bool needs_mae = c.training.warm_start || c.training.kd_enabled;
  model::Model mae;
  if (needs_mae) mae = load_stage(l.mae(), model::Stage::kMae);
  model::Model teacher;
  if (c.training.kd_enabled) {
    teacher = train::build_teacher(mae, c.training, &prepared);
    model::save_checkpoint(teacher, Layout::checkpoint(l.teacher()));
    write_config(c, l.teacher());
  }
  const train::StudentResult r = train::train_student(prepared, c.training.kd_enabled ? &teacher : nullptr,
                                                      needs_mae ? &mae : nullptr, c.training, c.model);
  model::save_checkpoint(r.model, Layout::checkpoint(l.student()));
  write_log(r.log, l.student());
  write_config(c, l.student());
}

void run_evaluate(const RunConfig& c) {
  const Layout l{c.paths.out};
  const data::PreparedData prepared = load_inputs(l);
  const model::Model student = load_stage(l.student(), model::Stage::kStudent);
  const eval::EvaluationResult r =
      eval::evaluate_model(student, prepared, c.evaluation, c.seed, "student", c.training.mt_enabled);
  write_evaluation(r, prepared, l.evaluation());
  write_config(c, l.evaluation());
}

void run_explain(const RunConfig& c) {
  const Layout l{c.paths.out};
  const data::PreparedData prepared = load_inputs(l);
  const model::Model student = load_stage(l.student(), model::Stage::kStudent);
  std::vector<std::size_t> rows = prepared.split.test;
  if (c.attribution.max_patients > 0 && rows.size() > c.attribution.max_patients) {
    rows.resize(c.attribution.max_patients);
  }
  attr::ShapleyOptions o;
  o.n_samples = c.attribution.n_samples;
  o.seed = c.seed;
  o.batch_size = c.evaluation.batch_size;
  const attr::AttributionResult r = attr::shapley_static(student, prepared, rows, o);
  const fs::path dir = l.attribution();
  io::write_file_atomic(dir / "shap.json", attr::attribution_to_json(r).dump(1) + "\n");
  io::write_file_atomic(dir / "shap_summary.csv", attr::attribution_summary_csv(r));
  io::write_file_atomic(dir / "shap_long.csv", attr::attribution_long_csv(r));
  write_config(c, dir);
}

void run_ablate(const RunConfig& c) {
  const Layout l{c.paths.out};
  const data::PreparedData prepared = load_inputs(l);
  const model::Model mae = load_stage(l.mae(), model::Stage::kMae);
  const train::AblationResult r = train::run_ablation(prepared, mae, c.training, c.evaluation);
  const fs::path dir = l.ablation();
  nlohmann::ordered_json summary;
  summary["split_fingerprint"] = prepared.split.fingerprint();
  summary["teacher_fingerprint"] = r.teacher_fingerprint;
  nlohmann::ordered_json arms = nlohmann::ordered_json::array();
  for (const auto& arm : r.arms) {
    const fs::path arm_dir = dir / arm.name;
    model::save_checkpoint(arm.student.model, Layout::checkpoint(arm_dir));
    write_log(arm.student.log, arm_dir);
    write_evaluation(arm.evaluation, prepared, arm_dir);
    RunConfig arm_config = c;
    arm_config.training = arm.config;
    write_config(arm_config, arm_dir);
    arms.push_back({{"name", arm.name},
                    {"kd_enabled", arm.config.kd_enabled},
                    {"mt_enabled", arm.config.mt_enabled},
                    {"teacher_fingerprint_before", arm.student.teacher_fingerprint_before},
                    {"teacher_fingerprint_after", arm.student.teacher_fingerprint_after},
                    {"report", eval::report_to_json(arm.evaluation.report)}});
  }
  summary["arms"] = std::move(arms);
  io::write_file_atomic(dir / "ablation.json", summary.dump(2) + "\n");
  io::write_file_atomic(dir / "ablation_table.csv", r.table_csv());
  write_config(c, dir);
}

}  // namespace viskd::pipeline
