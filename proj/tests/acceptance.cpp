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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Usage: acceptance [work_dir]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "common/error.hpp"
#include "common/format.hpp"
#include "common/io.hpp"
#include "common/log.hpp"
#include "data/generator.hpp"
#include "data/prepared.hpp"
#include "data/split.hpp"
#include "data/vis.hpp"
#include "evaluation/metrics.hpp"
#include "evaluation/report.hpp"
#include "model/checkpoint.hpp"
#include "model/mask.hpp"
#include "model/model.hpp"
#include "pipeline/stages.hpp"
#include "support/fixtures.hpp"
#include "support/gradcheck.hpp"
#include "support/gradient_suite.hpp"
#include "support/oracles.hpp"
#include "training/losses.hpp"
#include "training/trainer.hpp"

namespace {

namespace fs = std::filesystem;
using namespace viskd;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> check;
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string show(double v) { return fmt::number(v); }

// Default configuration apart from the output dir and seed.
pipeline::RunConfig run_config(const fs::path& out, std::uint64_t seed) {
  pipeline::RunConfig c;
  c.paths.out = out.string();
  c.seed = seed;
  c.resolve();
  return c;
}

pipeline::RunConfig null_config(const fs::path& out, std::uint64_t seed) {
  pipeline::RunConfig c = run_config(out, seed);
  c.data.signal_strength = 0.0;
  c.data.n_patients = 2000;
  c.resolve();
  return c;
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(io::read_file(p)); }

double test_auroc(const fs::path& metrics) {
  const auto report = eval::report_from_json(read_json(metrics));
  return report.metric("AUROC").point.value();
}

// Shared state between the pipeline-level criteria.
struct Runs {
  fs::path root;
  fs::path first;   // seed 42, planted signal
  fs::path second;  // identical rerun
  double first_seconds = 0.0;
  bool first_ok = false;
  std::string first_error;
};

void full_pipeline(const pipeline::RunConfig& c, bool explain) {
  pipeline::run_generate(c);
  pipeline::run_preprocess(c);
  pipeline::run_pretrain(c);
  pipeline::run_train(c);
  pipeline::run_evaluate(c);
  if (explain) pipeline::run_explain(c);
}

Outcome gradient_suite() {
  const auto start = Clock::now();
  auto cases = testing::primitive_grad_cases(20, 2024);
  const std::size_t primitives = cases.size();
  cases.push_back(testing::full_model_case(7));
  const testing::SuiteSummary s = testing::run_cases(cases);
  const double elapsed = seconds_since(start);
  Outcome o;
  o.pass = s.max_rel_error <= 1e-4 && elapsed < 60.0;
  o.detail = std::to_string(primitives) + " randomized primitive cases plus the full model (d_model 8), " +
             std::to_string(s.entries) + " entries, max rel error " + show(s.max_rel_error) + " (" +
             s.worst_case + "), " + show(std::round(elapsed * 100) / 100) + " s";
  return o;
}

Outcome unit_fixtures() {
  std::vector<std::string> failures;
  auto check = [&](const std::string& name, double got, double want) {
    if (!(std::abs(got - want) <= 1e-9)) failures.push_back(name + " got " + show(got) + " want " + show(want));
  };
  const std::array<double, data::kAgents> doses{2.5, 0, 0.05, 0.5, 0.002, 0.1};
  check("VIS", data::compute_total_vis(doses), 42.5);
  std::vector<int> labels(1000, 0);
  std::fill(labels.begin(), labels.begin() + 200, 1);
  const auto w = data::compute_class_weights(labels);
  check("w0", w[0], 0.625);
  check("w1", w[1], 2.5);
  const num::Tensor z = num::Tensor::matrix(2, 2, {0.3, -1.2, 4.0, 4.5});
  check("KD identical", train::kd_loss(z, z), 0.0);
  check("KD opposite", train::kd_loss(num::Tensor::matrix(1, 2, {800, -800}),
                                      num::Tensor::matrix(1, 2, {-800, 800})),
        2.0);
  const auto m = eval::binary_metrics({70, 80, 20, 30});
  check("Sens", *m.sensitivity, 0.7);
  check("Spec", *m.specificity, 0.8);
  check("PLR", *m.plr, 3.5);
  check("NLR", *m.nlr, 0.375);
  check("ACC", *m.accuracy, 0.75);
  std::size_t fixture_count = 0;
  for (const auto& f : testing::metric_fixtures()) {
    ++fixture_count;
    const std::string diff = testing::compare_fixture(f, 1e-9);
    if (!diff.empty()) failures.push_back(f.name + ": " + diff);
  }
  Outcome o;
  o.pass = failures.empty();
  o.detail = failures.empty()
                 ? "VIS 42.5, weights 0.625/2.5, KD 0 and 2, table fixture and " +
                       std::to_string(fixture_count) + " threshold fixtures exact"
                 : failures.front();
  return o;
}

Outcome masked_locality() {
  const model::EncoderConfig c;
  Rng rng = make_rng(5, "acceptance/locality");
  const num::Tensor target = testing::random_tensor({8, 48, 7}, rng);
  const num::Tensor recon = testing::random_tensor({8, 48, 7}, rng);
  const model::MaskPlan mask = model::make_mask(8, c, 5);
  const double base = train::mae_loss(recon, target, mask);
  std::size_t unmasked = 0, masked = 0, bad = 0;
  for (std::size_t i = 0; i < recon.numel(); ++i) {
    num::Tensor r = recon;
    r[i] += 0.5;
    const double v = train::mae_loss(r, target, mask);
    if (mask.cells[i]) {
      ++masked;
      bad += v == base;
    } else {
      ++unmasked;
      bad += v != base;
    }
  }
  Outcome o;
  o.pass = bad == 0 && masked == 8 * 17;
  o.detail = std::to_string(unmasked) + " unmasked perturbations bit-identical, " + std::to_string(masked) +
             " masked perturbations changed the loss, violations " + std::to_string(bad);
  return o;
}

Outcome auroc_oracle() {
  double worst = 0.0;
  std::size_t ties = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto inst = testing::random_auroc_instance(seed);
    auto sorted = inst.scores;
    std::sort(sorted.begin(), sorted.end());
    ties += std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
    worst = std::max(worst, std::abs(eval::auroc(inst.scores, inst.labels) -
                                     testing::brute_force_auroc(inst.scores, inst.labels)));
  }
  Outcome o;
  o.pass = worst <= 1e-9;
  o.detail = "100 instances (n <= 500, " + std::to_string(ties) + " with ties), max |diff| " + show(worst);
  return o;
}

Outcome learnability(Runs& runs) {
  std::ostringstream d;
  const auto start = Clock::now();
  try {
    full_pipeline(run_config(runs.first, 42), true);
    runs.first_ok = true;
  } catch (const Error& e) {
    runs.first_error = e.what();
  }
  runs.first_seconds = seconds_since(start);
  if (!runs.first_ok) return {false, "pipeline failed: " + runs.first_error};
  const pipeline::Layout l{runs.first};
  const double auc = test_auroc(l.evaluation() / "metrics.json");
  const std::string log = io::read_file(l.student() / "train_log.csv");
  const auto epochs = static_cast<std::size_t>(std::count(log.begin(), log.end(), '\n')) - 1;
  bool pass = auc >= 0.90 && epochs <= 30 && runs.first_seconds <= 600.0;
  d << "planted seed 42: test AUROC " << show(auc) << " after " << epochs << " student epochs, pipeline "
    << show(std::round(runs.first_seconds)) << " s; null AUROC";
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const fs::path dir = runs.root / ("null_" + std::to_string(seed));
    try {
      full_pipeline(null_config(dir, seed), false);
      const double a = test_auroc(pipeline::Layout{dir}.evaluation() / "metrics.json");
      d << " " << show(std::round(a * 1e4) / 1e4);
      pass = pass && a >= 0.40 && a <= 0.60;
    } catch (const Error& e) {
      d << " error(" << e.what() << ")";
      pass = false;
    }
  }
  d << " (2000 patients, seeds 1-5)";
  return {pass, d.str()};
}

struct AblationSeed {
  std::uint64_t seed;
  fs::path dir;
};

Outcome ablation(Runs& runs, Outcome& freeze) {
  std::vector<AblationSeed> seeds{{42, runs.first}};
  for (std::uint64_t s : {1, 2, 3, 4}) seeds.push_back({s, runs.root / ("ablation_" + std::to_string(s))});
  std::vector<double> baseline, no_kd, no_mt;
  std::ostringstream table;
  std::size_t kd_arms = 0, frozen = 0;
  std::string freeze_issue;
  for (const auto& s : seeds) {
    const pipeline::RunConfig c = run_config(s.dir, s.seed);
    try {
      if (s.seed != 42 || !runs.first_ok) {
        pipeline::run_generate(c);
        pipeline::run_preprocess(c);
        pipeline::run_pretrain(c);
      }
      pipeline::run_ablate(c);
    } catch (const Error& e) {
      freeze = {false, "ablation failed for seed " + std::to_string(s.seed)};
      return {false, std::string("ablation failed: ") + e.what()};
    }
    const pipeline::Layout l{s.dir};
    const auto summary = read_json(l.ablation() / "ablation.json");
    // Independent hash of the teacher rebuilt from the stored MAE checkpoint.
    const model::Model mae = model::load_checkpoint(pipeline::Layout::checkpoint(l.mae()));
    const std::string expected = model::parameter_fingerprint(train::build_teacher(mae, c.training));
    for (const auto& arm : summary["arms"]) {
      const std::string name = arm["name"];
      const double auc = eval::report_from_json(arm["report"]).metric("AUROC").point.value();
      (name == "baseline" ? baseline : name == "no_kd" ? no_kd : no_mt).push_back(auc);
      if (arm["kd_enabled"].get<bool>()) {
        ++kd_arms;
        const bool ok = arm["teacher_fingerprint_before"] == arm["teacher_fingerprint_after"] &&
                        arm["teacher_fingerprint_before"] == expected;
        frozen += ok;
        if (!ok) freeze_issue = "seed " + std::to_string(s.seed) + " arm " + name;
      }
    }
    table << "  seed " << s.seed << ":\n";
    std::istringstream rows(io::read_file(l.ablation() / "ablation_table.csv"));
    for (std::string line; std::getline(rows, line);) table << "    " << line << "\n";
  }
  freeze = {kd_arms == 10 && frozen == kd_arms,
            std::to_string(frozen) + "/" + std::to_string(kd_arms) +
                " kd arms kept the teacher hash across 5 seeds" +
                (freeze_issue.empty() ? "" : "; mismatch at " + freeze_issue)};
  const double mb = median(baseline), mk = median(no_kd), mm = median(no_mt);
  std::ostringstream d;
  d << "median test AUROC baseline " << show(std::round(mb * 1e4) / 1e4) << ", no_kd "
    << show(std::round(mk * 1e4) / 1e4) << ", no_mt " << show(std::round(mm * 1e4) / 1e4)
    << " over seeds 42,1,2,3,4\n"
    << table.str();
  std::string detail = d.str();
  if (!detail.empty() && detail.back() == '\n') detail.pop_back();
  return {baseline.size() == 5 && no_mt.size() == 5 && mb >= mm, detail};
}

Outcome shapley(const Runs& runs) {
  const auto oracle = testing::linear_shapley_oracle(2000, 11);
  std::ostringstream d;
  d << "linear oracle max rel error " << show(oracle.max_rel_error) << " over " << oracle.groups << " groups";
  bool pass = oracle.max_rel_error <= 0.02;
  if (!runs.first_ok) return {false, d.str() + "; trained run unavailable"};
  const pipeline::Layout l{runs.first};
  const auto shap = read_json(l.attribution() / "shap.json");
  const data::PreparedData prepared = data::load_prepared(l.prepared());
  const model::Model student = model::load_checkpoint(pipeline::Layout::checkpoint(l.student()));
  const auto preds = model::predict(student, num::gather_rows(prepared.vis, prepared.split.test),
                                    num::gather_rows(prepared.static_full, prepared.split.test),
                                    num::gather_rows(prepared.static_scorefree, prepared.split.test));
  double gap = 0.0, pred_diff = 0.0;
  std::size_t i = 0;
  for (const auto& p : shap["patients"]) {
    double sum = 0.0;
    for (double v : p["values"]) sum += v;
    gap = std::max(gap, std::abs(sum - (p["prediction"].get<double>() - p["base_value"].get<double>())));
    pred_diff = std::max(pred_diff, std::abs(p["prediction"].get<double>() - preds.prob_positive[i++]));
  }
  d << "; trained model: " << i << " test patients, " << shap["n_samples"].get<int>()
    << " permutations each, max local-accuracy gap " << show(gap) << ", explained output matches model within "
    << show(pred_diff);
  pass = pass && i == prepared.split.test.size() && gap <= 0.02 && pred_diff <= 1e-12;
  return {pass, d.str()};
}

Outcome determinism(Runs& runs) {
  if (!runs.first_ok) return {false, "first run unavailable"};
  try {
    full_pipeline(run_config(runs.second, 42), false);
  } catch (const Error& e) {
    return {false, std::string("second run failed: ") + e.what()};
  }
  const pipeline::Layout a{runs.first}, b{runs.second};
  const auto ra = eval::report_from_json(read_json(a.evaluation() / "metrics.json"));
  const auto rb = eval::report_from_json(read_json(b.evaluation() / "metrics.json"));
  bool pass = ra == rb;
  std::vector<std::string> differing;
  for (const char* rel : {"evaluation/metrics.json", "evaluation/predictions.csv", "mae/checkpoint.json",
                          "teacher/checkpoint.json", "student/checkpoint.json", "student/train_log.csv"}) {
    if (io::read_file(runs.first / rel) != io::read_file(runs.second / rel)) differing.push_back(rel);
  }
  pass = pass && differing.empty();

  const fs::path ckpt = pipeline::Layout::checkpoint(a.student());
  const model::Model loaded = model::load_checkpoint(ckpt);
  const fs::path copy = runs.root / "student_roundtrip.json";
  model::save_checkpoint(loaded, copy);
  const bool bytes_equal = io::read_file(copy) == io::read_file(ckpt);
  const model::Model reloaded = model::load_checkpoint(copy);
  const data::PreparedData prepared = data::load_prepared(a.prepared());
  const auto p1 = model::predict(loaded, prepared.vis, prepared.static_full, prepared.static_scorefree);
  const auto p2 = model::predict(reloaded, prepared.vis, prepared.static_full, prepared.static_scorefree);
  const bool outputs_equal = p1.logits == p2.logits && p1.regression == p2.regression && p1.cls == p2.cls;
  const auto test_preds = model::predict(loaded, num::gather_rows(prepared.vis, prepared.split.test),
                                         num::gather_rows(prepared.static_full, prepared.split.test),
                                         num::gather_rows(prepared.static_scorefree, prepared.split.test));
  std::istringstream csv(io::read_file(a.evaluation() / "predictions.csv"));
  std::string line;
  std::getline(csv, line);
  std::size_t rows = 0, mismatched = 0;
  while (std::getline(csv, line)) {
    const std::string score = line.substr(line.rfind(',') + 1);
    mismatched += rows >= test_preds.prob_positive.size() || score != fmt::number(test_preds.prob_positive[rows]);
    ++rows;
  }
  const bool csv_ok = mismatched == 0 && rows == prepared.split.test.size();
  pass = pass && bytes_equal && outputs_equal && csv_ok;
  std::ostringstream d;
  d << "two seed-42 runs: MetricsReport " << (ra == rb ? "identical" : "DIFFERENT") << ", "
    << (differing.empty() ? std::string("checkpoints, logs and predictions byte-identical")
                          : "differing: " + differing.front())
    << "; checkpoint save/load " << (bytes_equal ? "byte-identical" : "NOT byte-identical") << ", forward outputs "
    << (outputs_equal ? "bit-identical" : "DIFFERENT") << " on " << prepared.size() << " patients; "
    << rows - mismatched << "/" << rows << " stored test scores reproduced by the reloaded model";
  return {pass, d.str()};
}

Outcome early_stop() {
  const data::PreparedData d = testing::make_prepared(200, 6.0, 9);
  train::TrainConfig t;
  t.learning_rate = 0.0;
  t.seed = 9;
  model::EncoderConfig c;
  const auto mae = train::pretrain_mae(d, c, t);
  const model::Model teacher = train::build_teacher(mae.model, t);
  const auto s = train::train_student(d, &teacher, &mae.model, t);
  const std::size_t want = t.patience + 1;
  Outcome o;
  o.pass = s.log.epochs.size() == want && s.log.stopped_early && mae.log.epochs.size() == want;
  o.detail = "patience " + std::to_string(t.patience) + ", lr 0: student stopped after " +
             std::to_string(s.log.epochs.size()) + " epochs, pretraining after " +
             std::to_string(mae.log.epochs.size()) + " (expected " + std::to_string(want) + ")";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  log::set_quiet(true);
  Runs runs;
  runs.root = argc > 1 ? fs::path(argv[1]) : fs::current_path() / "acceptance_runs";
  fs::remove_all(runs.root);
  fs::create_directories(runs.root);
  runs.first = runs.root / "seed42_a";
  runs.second = runs.root / "seed42_b";

  Outcome freeze{false, "ablation did not run"};
  const std::vector<Criterion> criteria{
      {1, "gradient suite", gradient_suite},
      {2, "unit fixtures", unit_fixtures},
      {3, "masked-loss locality", masked_locality},
      {5, "AUROC oracle", auroc_oracle},
      {6, "learnability", [&] { return learnability(runs); }},
      {7, "ablation ordering", [&] { return ablation(runs, freeze); }},
      {4, "teacher freeze", [&] { return freeze; }},
      {8, "Shapley oracle", [&] { return shapley(runs); }},
      {9, "determinism and persistence", [&] { return determinism(runs); }},
      {10, "early stop", early_stop},
  };
  std::vector<std::pair<int, std::string>> lines;
  bool all = true;
  for (const auto& c : criteria) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    const std::string line = "criterion " + std::to_string(c.id) + ": " + (o.pass ? "PASS" : "FAIL") + " [" +
                             c.title + "] " + o.detail;
    std::cout << line << "  (" << show(std::round(seconds_since(start))) << " s)" << std::endl;
    lines.emplace_back(c.id, line);
  }
  std::sort(lines.begin(), lines.end());
  std::cout << "\nsummary:\n";
  for (const auto& [id, line] : lines) std::cout << line.substr(0, line.find(']') + 1) << "\n";
  std::cout << (all ? "all acceptance criteria passed" : "acceptance FAILED") << std::endl;
  return all ? 0 : 1;
}
