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

#include "evaluation/report.hpp"

#include <algorithm>

#include "common/error.hpp"
#include "common/format.hpp"
#include "evaluation/bootstrap.hpp"
#include "evaluation/metrics.hpp"

namespace viskd::eval {
namespace {

std::size_t column_index(std::string_view column) {
  auto it = std::find(kReportColumns.begin(), kReportColumns.end(), column);
  if (it == kReportColumns.end()) throw_contract("unknown report column " + std::string(column));
  return static_cast<std::size_t>(it - kReportColumns.begin());
}

std::optional<double> threshold_metric(std::string_view column, const BinaryMetrics& m) {
  if (column == "PPV") return m.ppv;
  if (column == "NPV") return m.npv;
  if (column == "PLR") return m.plr;
  if (column == "NLR") return m.nlr;
  if (column == "ACC") return m.accuracy;
  if (column == "Sensitivity") return m.sensitivity;
  if (column == "Specificity") return m.specificity;
  throw_contract("not a threshold metric: " + std::string(column));
}

nlohmann::ordered_json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

std::optional<double> optional_from(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

const MetricEstimate& MetricsReport::metric(std::string_view column) const {
  return metrics[column_index(column)];
}

MetricEstimate& MetricsReport::metric(std::string_view column) {
  return metrics[column_index(column)];
}

void EvaluationOptions::validate() const {
  BootstrapOptions{n_resamples, confidence, 0, 10}.validate();
  if (batch_size == 0) throw_config("evaluation: batch_size must be positive");
}

EvaluationResult evaluate_model(const model::Model& model, const data::PreparedData& data,
                                const EvaluationOptions& options, std::uint64_t seed,
                                const std::string& name, bool regression_trained) {
  options.validate();
  const auto& split = data.split;
  auto rows_of = [&](const std::vector<std::size_t>& rows) {
    return model::predict(model, num::gather_rows(data.vis, rows),
                          num::gather_rows(data.static_full, rows),
                          num::gather_rows(data.static_scorefree, rows), options.batch_size);
  };
  const model::Predictions val = rows_of(split.validation);
  const model::Predictions test = rows_of(split.test);
  const std::vector<int> val_labels = data.labels_at(split.validation);
  const std::vector<int> test_labels = data.labels_at(split.test);
  const num::Tensor test_targets = num::gather_rows(data.score_targets, split.test);

  EvaluationResult result;
  MetricsReport& r = result.report;
  r.name = name;
  r.threshold = choose_threshold(val.prob_positive, val_labels);
  r.n = test_labels.size();
  r.n_positive = static_cast<std::size_t>(std::count(test_labels.begin(), test_labels.end(), 1));
  r.seed = seed;
  r.n_resamples = options.n_resamples;
  r.confidence = options.confidence;
  r.split_fingerprint = split.fingerprint();

  const std::vector<double>& scores = test.prob_positive;
  BootstrapOptions boot{options.n_resamples, options.confidence, seed, 10};

  // R2 over the z-scored severity targets.
  {
    const std::size_t k = test_targets.dim(1);
    auto r2_on = [&](std::span<const std::size_t> rows) -> std::optional<double> {
      num::Tensor p({rows.size(), k}), t({rows.size(), k});
      for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t d = 0; d < k; ++d) {
          p[i * k + d] = test.regression[rows[i] * k + d];
          t[i * k + d] = test_targets[rows[i] * k + d];
        }
      }
      return r2_score(p, t).mean;
    };
    std::vector<std::size_t> all(r.n);
    for (std::size_t i = 0; i < r.n; ++i) all[i] = i;
    MetricEstimate& e = r.metric("R2");
    e.point = r2_on(all);
    if (e.point) {
      const ConfidenceInterval ci = bootstrap_ci(r2_on, test_labels, boot, e.point);
      e.low = ci.low;
      e.high = ci.high;
    }
    if (!regression_trained) {
      r.notes.push_back("R2: regression head was not trained in this configuration; not comparable");
    }
  }

  {
    MetricEstimate& e = r.metric("AUROC");
    e.point = auroc(scores, test_labels);
    const ConfidenceInterval ci = bootstrap_ci(try_auroc, scores, test_labels, boot, e.point);
    e.low = ci.low;
    e.high = ci.high;
  }

  const BinaryMetrics point = binary_metrics(confusion_at_threshold(scores, test_labels, r.threshold));
  for (std::string_view column : kReportColumns) {
    if (column == "R2" || column == "AUROC") continue;
    MetricEstimate& e = r.metric(column);
    e.point = threshold_metric(column, point);
    if (!e.point) {
      r.notes.push_back(std::string(column) + ": undefined on the test split (zero denominator)");
      continue;
    }
    auto on_sample = [&](std::span<const double> s, std::span<const int> y) {
      return threshold_metric(column, binary_metrics(confusion_at_threshold(s, y, r.threshold)));
    };
    try {
      const ConfidenceInterval ci = bootstrap_ci(on_sample, scores, test_labels, boot, e.point);
      e.low = ci.low;
      e.high = ci.high;
    } catch (const Error& err) {
      if (err.reason() != ErrorReason::kUndefinedMetric) throw;
      r.notes.push_back(std::string(column) + ": interval undefined on every resample");
    }
  }

  result.roc = roc_curve(scores, test_labels);
  result.test_scores = scores;
  return result;
}

nlohmann::ordered_json report_to_json(const MetricsReport& r) {
  nlohmann::ordered_json j;
  j["format_version"] = r.format_version;
  j["name"] = r.name;
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < kReportColumns.size(); ++i) {
    const MetricEstimate& e = r.metrics[i];
    metrics[std::string(kReportColumns[i])] = {
        {"point", optional_json(e.point)}, {"ci_low", optional_json(e.low)}, {"ci_high", optional_json(e.high)}};
  }
  j["metrics"] = std::move(metrics);
  j["threshold"] = r.threshold;
  j["n"] = r.n;
  j["n_positive"] = r.n_positive;
  j["seed"] = r.seed;
  j["n_resamples"] = r.n_resamples;
  j["confidence"] = r.confidence;
  j["split_fingerprint"] = r.split_fingerprint;
  j["notes"] = r.notes;
  return j;
}

MetricsReport report_from_json(const nlohmann::json& j) {
  MetricsReport r;
  try {
    r.format_version = j.at("format_version").get<int>();
    r.name = j.at("name").get<std::string>();
    for (std::size_t i = 0; i < kReportColumns.size(); ++i) {
      const auto& m = j.at("metrics").at(std::string(kReportColumns[i]));
      r.metrics[i] = {optional_from(m.at("point")), optional_from(m.at("ci_low")),
                      optional_from(m.at("ci_high"))};
    }
    r.threshold = j.at("threshold").get<double>();
    r.n = j.at("n").get<std::size_t>();
    r.n_positive = j.at("n_positive").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.n_resamples = j.at("n_resamples").get<std::size_t>();
    r.confidence = j.at("confidence").get<double>();
    r.split_fingerprint = j.at("split_fingerprint").get<std::string>();
    r.notes = j.at("notes").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw_data(ErrorReason::kSchema, std::string("metrics report: ") + e.what());
  }
  return r;
}

std::string report_csv_header() {
  std::string h = "name";
  for (std::string_view c : kReportColumns) {
    const std::string s(c);
    h += "," + s + "," + s + "_ci_low," + s + "_ci_high";
  }
  return h + ",threshold,n\n";
}

std::string report_csv_row(const MetricsReport& r) {
  std::string row = r.name;
  for (const MetricEstimate& e : r.metrics) {
    row += "," + fmt::optional_number(e.point) + "," + fmt::optional_number(e.low) + "," +
           fmt::optional_number(e.high);
  }
  return row + "," + fmt::number(r.threshold) + "," + std::to_string(r.n) + "\n";
}

}  // namespace viskd::eval
