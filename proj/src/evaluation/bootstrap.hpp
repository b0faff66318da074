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
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace viskd::eval {

struct ConfidenceInterval {
  double low = 0.0;
  double high = 0.0;
  /// Resamples on which the metric was defined.
  std::size_t n_valid = 0;
  bool operator==(const ConfidenceInterval&) const = default;
};

/// Metric evaluated on a resample given as row indices into the original
/// arrays; empty when undefined on that resample.
using ResampleMetric = std::function<std::optional<double>(std::span<const std::size_t> rows)>;

struct BootstrapOptions {
  std::size_t n_resamples = 1000;
  double confidence = 0.95;
  std::uint64_t seed = 0;
  /// Attempts per requested resample before giving up on undefined draws.
  std::size_t max_attempts_factor = 10;
  void validate() const;
};

/// Linear-interpolation percentile (q in [0, 1]) of sorted values.
double percentile_sorted(std::span<const double> sorted, double q);

/// Percentile bootstrap over patient-level resamples drawn with replacement
/// within each label class. Undefined draws are redrawn up to the attempt
/// cap. When `point` lies outside the percentile interval the interval is
/// extended to contain it.
ConfidenceInterval bootstrap_ci(const ResampleMetric& metric, std::span<const int> labels,
                                const BootstrapOptions& options,
                                std::optional<double> point = std::nullopt);

/// Convenience form for a metric of (scores, labels).
ConfidenceInterval bootstrap_ci(
    const std::function<std::optional<double>(std::span<const double>, std::span<const int>)>& metric,
    std::span<const double> scores, std::span<const int> labels, const BootstrapOptions& options,
    std::optional<double> point = std::nullopt);

}  // namespace viskd::eval
