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

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "numerics/tensor.hpp"

namespace viskd::eval {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + tn + fp + fn; }
  bool operator==(const ConfusionCounts&) const = default;
};

/// Predicts positive iff score >= threshold.
ConfusionCounts confusion_at_threshold(std::span<const double> scores, std::span<const int> labels,
                                       double threshold);

/// Metrics with a zero denominator are left empty rather than fabricated.
struct BinaryMetrics {
  std::optional<double> ppv;
  std::optional<double> npv;
  std::optional<double> sensitivity;
  std::optional<double> specificity;
  std::optional<double> plr;
  std::optional<double> nlr;
  std::optional<double> accuracy;
};

BinaryMetrics binary_metrics(const ConfusionCounts& counts);

/// Mann-Whitney statistic via average ranks. Single-class input is an
/// undefined-metric error.
double auroc(std::span<const double> scores, std::span<const int> labels);

/// Same as auroc but empty instead of throwing on single-class input.
std::optional<double> try_auroc(std::span<const double> scores, std::span<const int> labels);

struct R2Result {
  std::vector<std::optional<double>> per_dim;  // empty entry: zero-variance target
  std::optional<double> mean;                  // over defined dims
};

/// Per-dimension 1 - SS_res / SS_tot, then the unweighted mean.
R2Result r2_score(const num::Tensor& pred, const num::Tensor& target);

/// Youden's J maximizer on validation scores. Among equally good prediction
/// sets the lowest one wins; the returned value is the midpoint of the
/// interval of thresholds that produce it.
double choose_threshold(std::span<const double> scores, std::span<const int> labels);

/// Validates labels in {0,1} and equal lengths; throws otherwise.
void check_scored_labels(std::span<const double> scores, std::span<const int> labels);

}  // namespace viskd::eval
