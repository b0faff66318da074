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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "data/prepared.hpp"
#include "evaluation/roc.hpp"
#include "model/model.hpp"

namespace viskd::eval {

/// Report columns in table order.
inline constexpr std::array<std::string_view, 9> kReportColumns{
    "R2", "AUROC", "PPV", "NPV", "PLR", "NLR", "ACC", "Sensitivity", "Specificity"};

struct MetricEstimate {
  std::optional<double> point;
  std::optional<double> low;
  std::optional<double> high;
  bool operator==(const MetricEstimate&) const = default;
};

struct MetricsReport {
  int format_version = 1;
  std::string name;
  std::array<MetricEstimate, kReportColumns.size()> metrics;
  double threshold = 0.5;
  std::size_t n = 0;
  std::size_t n_positive = 0;
  std::uint64_t seed = 0;
  std::size_t n_resamples = 0;
  double confidence = 0.95;
  std::string split_fingerprint;
  std::vector<std::string> notes;

  const MetricEstimate& metric(std::string_view column) const;
  MetricEstimate& metric(std::string_view column);
  bool operator==(const MetricsReport&) const = default;
};

struct EvaluationOptions {
  std::size_t n_resamples = 1000;
  double confidence = 0.95;
  std::size_t batch_size = 64;
  void validate() const;
};

struct EvaluationResult {
  MetricsReport report;
  std::vector<RocPoint> roc;
  std::vector<double> test_scores;
};

/// Threshold from the validation split, metrics and bootstrap intervals on
/// the test split. `regression_trained` false marks R2 as non-comparable.
EvaluationResult evaluate_model(const model::Model& model, const data::PreparedData& data,
                                const EvaluationOptions& options, std::uint64_t seed,
                                const std::string& name = "model", bool regression_trained = true);

nlohmann::ordered_json report_to_json(const MetricsReport& report);
MetricsReport report_from_json(const nlohmann::json& j);

/// name, then <metric>, <metric>_ci_low, <metric>_ci_high per column, then
/// threshold and n.
std::string report_csv_header();
std::string report_csv_row(const MetricsReport& report);

}  // namespace viskd::eval
