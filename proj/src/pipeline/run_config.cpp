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

#include "pipeline/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "common/error.hpp"
#include "common/io.hpp"

namespace viskd::pipeline {
namespace {

using Json = nlohmann::json;

std::size_t line_at(const std::string& text, std::size_t pos) {
  pos = std::min(pos, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

/// Line of `"key"` inside `"section"` (or at top level when section is
/// empty); the section's own line when the key is not found.
std::size_t line_of(const std::string& text, const std::string& section, const std::string& key) {
  std::size_t from = 0;
  if (!section.empty()) {
    const auto s = text.find("\"" + section + "\"");
    if (s == std::string::npos) return 1;
    from = s;
    if (key.empty()) return line_at(text, s);
  }
  const auto k = text.find("\"" + key + "\"", from);
  return line_at(text, k == std::string::npos ? from : k);
}

class Reader {
 public:
  Reader(const std::string& text, const std::string& source, const std::string& section, const Json& j)
      : text_(text), source_(source), section_(section), j_(j) {
    if (!j.is_object()) fail(section, section.empty() ? "config must be an object" : section + " must be an object");
  }

  template <class T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const Json::exception&) {
      fail(key, "invalid value for '" + qualified(key) + "'");
    }
  }

  void skip(const std::string& key) { seen_.insert(key); }

  void finish() {
    for (const auto& item : j_.items()) {
      if (!seen_.count(item.key())) fail(item.key(), "unknown key '" + qualified(item.key()) + "'");
    }
  }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    const std::size_t line = section_.empty() ? line_of(text_, "", key) : line_of(text_, section_, key);
    throw_config(source_ + ":" + std::to_string(line) + ": " + message);
  }

 private:
  std::string qualified(const std::string& key) const { return section_.empty() ? key : section_ + "." + key; }

  const std::string& text_;
  const std::string& source_;
  std::string section_;
  const Json& j_;
  std::set<std::string> seen_;
};

const Json& section_of(const Json& root, const char* name) {
  static const Json empty = Json::object();
  auto it = root.find(name);
  return it == root.end() ? empty : *it;
}

}  // namespace

void RunConfig::resolve() {
  if (format_version != 1) throw_config("unsupported config format_version " + std::to_string(format_version));
  training.seed = seed;
  generator().validate();
  double total = 0.0;
  for (double f : data.split_fractions) {
    if (f < 0.0) throw_config("data.split_fractions must be nonnegative");
    total += f;
  }
  if (std::abs(total - 1.0) > 1e-9) throw_config("data.split_fractions must sum to 1");
  model.validate();
  training.validate();
  evaluation.validate();
  if (attribution.n_samples < 1) throw_config("attribution.n_samples must be positive");
  if (paths.out.empty()) throw_config("paths.out must not be empty");
}

std::filesystem::path RunConfig::cohort_path() const {
  return paths.cohort.empty() ? std::filesystem::path(paths.out) / "cohort.jsonl"
                              : std::filesystem::path(paths.cohort);
}

data::GeneratorOptions RunConfig::generator() const {
  data::GeneratorOptions g;
  g.n_patients = data.n_patients;
  g.signal_strength = data.signal_strength;
  g.missingness_rate = data.missingness_rate;
  g.positive_rate = data.positive_rate;
  g.seed = seed;
  return g;
}

nlohmann::ordered_json run_config_to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["format_version"] = c.format_version;
  j["seed"] = c.seed;
  j["paths"] = {{"cohort", c.paths.cohort}, {"out", c.paths.out}};
  j["data"] = {{"n_patients", c.data.n_patients},
               {"signal_strength", c.data.signal_strength},
               {"missingness_rate", c.data.missingness_rate},
               {"positive_rate", c.data.positive_rate},
               {"split_fractions", c.data.split_fractions}};
  j["model"] = model::to_json(c.model);
  const auto& t = c.training;
  j["training"] = {{"lambda_cls", t.lambda_cls},
                   {"lambda_reg", t.lambda_reg},
                   {"lambda_kd", t.lambda_kd},
                   {"learning_rate", t.learning_rate},
                   {"weight_decay", t.weight_decay},
                   {"batch_size", t.batch_size},
                   {"max_epochs_pretrain", t.max_epochs_pretrain},
                   {"max_epochs_student", t.max_epochs_student},
                   {"patience", t.patience},
                   {"kd_enabled", t.kd_enabled},
                   {"mt_enabled", t.mt_enabled},
                   {"warm_start", t.warm_start},
                   {"teacher_finetune", t.teacher_finetune}};
  j["evaluation"] = {{"n_resamples", c.evaluation.n_resamples},
                     {"confidence", c.evaluation.confidence},
                     {"batch_size", c.evaluation.batch_size}};
  j["attribution"] = {{"n_samples", c.attribution.n_samples}, {"max_patients", c.attribution.max_patients}};
  return j;
}

std::string serialize_run_config(const RunConfig& c) { return run_config_to_json(c).dump(2) + "\n"; }

RunConfig parse_run_config(const std::string& text, const std::string& source) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw_config(source + ":" + std::to_string(line_at(text, e.byte == 0 ? 0 : e.byte - 1)) +
                 ": malformed config: " + e.what());
  }
  RunConfig c;
  Reader top(text, source, "", root);
  top.get("format_version", c.format_version);
  top.get("seed", c.seed);
  for (const char* s : {"paths", "data", "model", "training", "evaluation", "attribution"}) top.skip(s);
  top.finish();

  Reader paths(text, source, "paths", section_of(root, "paths"));
  paths.get("cohort", c.paths.cohort);
  paths.get("out", c.paths.out);
  paths.finish();

  Reader d(text, source, "data", section_of(root, "data"));
  d.get("n_patients", c.data.n_patients);
  d.get("signal_strength", c.data.signal_strength);
  d.get("missingness_rate", c.data.missingness_rate);
  d.get("positive_rate", c.data.positive_rate);
  d.get("split_fractions", c.data.split_fractions);
  d.finish();

  const Json& model_json = section_of(root, "model");
  Reader m(text, source, "model", model_json);
  for (const auto& item : model_json.items()) {
    try {
      (void)model::encoder_config_from_json(Json{{item.key(), item.value()}});
    } catch (const Error& e) {
      // Per-key checks pass values through validate(); only report keys
      // that fail on their own.
      const std::string what = e.what();
      if (what.find("unknown key") != std::string::npos || what.find("model." + item.key()) != std::string::npos) {
        m.fail(item.key(), what);
      }
    }
  }
  try {
    c.model = model::encoder_config_from_json(model_json);
  } catch (const Error& e) {
    m.fail("", e.what());
  }

  auto& t = c.training;
  Reader tr(text, source, "training", section_of(root, "training"));
  tr.get("lambda_cls", t.lambda_cls);
  tr.get("lambda_reg", t.lambda_reg);
  tr.get("lambda_kd", t.lambda_kd);
  tr.get("learning_rate", t.learning_rate);
  tr.get("weight_decay", t.weight_decay);
  tr.get("batch_size", t.batch_size);
  tr.get("max_epochs_pretrain", t.max_epochs_pretrain);
  tr.get("max_epochs_student", t.max_epochs_student);
  tr.get("patience", t.patience);
  tr.get("kd_enabled", t.kd_enabled);
  tr.get("mt_enabled", t.mt_enabled);
  tr.get("warm_start", t.warm_start);
  tr.get("teacher_finetune", t.teacher_finetune);
  tr.finish();

  Reader ev(text, source, "evaluation", section_of(root, "evaluation"));
  ev.get("n_resamples", c.evaluation.n_resamples);
  ev.get("confidence", c.evaluation.confidence);
  ev.get("batch_size", c.evaluation.batch_size);
  ev.finish();

  Reader at(text, source, "attribution", section_of(root, "attribution"));
  at.get("n_samples", c.attribution.n_samples);
  at.get("max_patients", c.attribution.max_patients);
  at.finish();

  try {
    c.resolve();
  } catch (const Error& e) {
    throw_config(source + ": " + e.what());
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = io::read_file(path);
  } catch (const Error&) {
    throw_config("cannot read config file " + path.string());
  }
  return parse_run_config(text, path.string());
}

}  // namespace viskd::pipeline
