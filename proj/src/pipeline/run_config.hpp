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
#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "data/generator.hpp"
#include "data/split.hpp"
#include "evaluation/report.hpp"
#include "model/config.hpp"
#include "training/trainer.hpp"

namespace viskd::pipeline {

struct PathsConfig {
  /// Cohort file; empty means <out>/cohort.jsonl.
  std::string cohort;
  std::string out = "runs/default";
  bool operator==(const PathsConfig&) const = default;
};

struct DataConfig {
  std::size_t n_patients = 500;
  double signal_strength = 6.0;
  double missingness_rate = 0.05;
  double positive_rate = 0.22;
  std::array<double, 3> split_fractions = data::kDefaultSplitFractions;
  bool operator==(const DataConfig&) const = default;
};

struct AttributionConfig {
  std::size_t n_samples = 200;
  /// Test patients to explain; 0 means all.
  std::size_t max_patients = 0;
  bool operator==(const AttributionConfig&) const = default;
};

/// Every setting of a run. Precedence: built-in defaults, then the config
/// file, then command-line flags. `seed` is the single root of all random
/// streams and overrides any per-section seed.
struct RunConfig {
  int format_version = 1;
  std::uint64_t seed = 42;
  PathsConfig paths;
  DataConfig data;
  model::EncoderConfig model;
  train::TrainConfig training;
  eval::EvaluationOptions evaluation;
  AttributionConfig attribution;

  /// Copies the root seed into the sections and validates them.
  void resolve();
  std::filesystem::path cohort_path() const;
  data::GeneratorOptions generator() const;
};

nlohmann::ordered_json run_config_to_json(const RunConfig& config);
std::string serialize_run_config(const RunConfig& config);

/// Unknown keys and bad values are config errors anchored as
/// "<source>:<line>: ...". Missing keys keep their defaults.
RunConfig parse_run_config(const std::string& text, const std::string& source = "config");
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace viskd::pipeline
