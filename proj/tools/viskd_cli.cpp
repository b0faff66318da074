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

#include <CLI11.hpp>

#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "viskd/viskd.h"

namespace {

struct ConfigHandle {
  vk_config* ptr = nullptr;
  ~ConfigHandle() { vk_config_free(ptr); }
};

int report(vk_status s) {
  if (s == VK_OK) return 0;
  std::fprintf(stderr, "error: %s\n", vk_last_error());
  switch (s) {
    case VK_ERR_CONFIG:
    case VK_ERR_DATA:
    case VK_ERR_DIVERGENCE:
    case VK_ERR_MISSING_ARTIFACT:
      return static_cast<int>(s);
    default:
      return 1;
  }
}

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mortality prediction from vasoactive-inotropic score series"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  bool quiet = false;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "JSON run configuration file");
  app.add_option("--seed", seed, "Root seed for every random stream");
  app.add_option("--out", out_dir, "Output directory");
  app.add_flag("--quiet", quiet, "Print warnings and errors only");
  app.add_option("--set", overrides, "Override a config value, e.g. training.patience=3")->take_all();

  std::optional<std::size_t> n_patients;
  std::optional<double> signal, missingness;
  std::string cohort;
  auto* generate = app.add_subcommand("generate", "Write a synthetic cohort");
  generate->add_option("--n", n_patients, "Number of patients");
  generate->add_option("--signal", signal, "Planted signal strength (0 for none)");
  generate->add_option("--missingness", missingness, "Per-cell null probability");
  generate->add_option("--cohort", cohort, "Cohort file to write");
  auto* preprocess = app.add_subcommand("preprocess", "Split, impute, normalize and encode a cohort");
  preprocess->add_option("--cohort", cohort, "Cohort file to read");
  auto* pretrain = app.add_subcommand("pretrain", "Masked-reconstruction pretraining");
  auto* train = app.add_subcommand("train", "Build the frozen teacher and train the student");
  auto* evaluate = app.add_subcommand("evaluate", "Test-split metrics with bootstrap intervals and ROC data");
  auto* explain = app.add_subcommand("explain", "Shapley attribution over static features");
  auto* ablate = app.add_subcommand("ablate", "Train and evaluate the baseline, no_kd and no_mt arms");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  vk_set_quiet(quiet ? 1 : 0);
  ConfigHandle config;
  vk_status s = config_path.empty() ? vk_config_default(&config.ptr)
                                    : vk_config_load(config_path.c_str(), &config.ptr);
  if (s != VK_OK) return report(s);

  std::vector<std::pair<std::string, std::string>> sets;
  for (const std::string& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", o.c_str());
      return 2;
    }
    std::string value = o.substr(eq + 1);
    // Bare words are taken as strings.
    const bool is_json_literal = !value.empty() && (std::isdigit(static_cast<unsigned char>(value[0])) ||
                                                     value[0] == '-' || value[0] == '[' || value[0] == '{' ||
                                                     value[0] == '"' || value == "true" || value == "false" ||
                                                     value == "null");
    sets.emplace_back(o.substr(0, eq), is_json_literal ? value : json_string(value));
  }
  if (n_patients) sets.emplace_back("data.n_patients", std::to_string(*n_patients));
  if (signal) sets.emplace_back("data.signal_strength", CLI::detail::to_string(*signal));
  if (missingness) sets.emplace_back("data.missingness_rate", CLI::detail::to_string(*missingness));
  if (!cohort.empty()) sets.emplace_back("paths.cohort", json_string(cohort));
  for (const auto& [key, value] : sets) {
    if ((s = vk_config_set(config.ptr, key.c_str(), value.c_str())) != VK_OK) return report(s);
  }
  if (seed && (s = vk_config_set_seed(config.ptr, *seed)) != VK_OK) return report(s);
  if (!out_dir.empty() && (s = vk_config_set_output_dir(config.ptr, out_dir.c_str())) != VK_OK) {
    return report(s);
  }

  const std::map<CLI::App*, std::function<vk_status(const vk_config*)>> stages{
      {generate, vk_run_generate}, {preprocess, vk_run_preprocess}, {pretrain, vk_run_pretrain},
      {train, vk_run_train},       {evaluate, vk_run_evaluate},     {explain, vk_run_explain},
      {ablate, vk_run_ablate}};
  for (const auto& [sub, run] : stages) {
    if (sub->parsed()) return report(run(config.ptr));
  }
  return 1;
}
