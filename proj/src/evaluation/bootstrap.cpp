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

#include "evaluation/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace viskd::eval {

void BootstrapOptions::validate() const {
  if (n_resamples < 100) throw_config("bootstrap: n_resamples must be at least 100");
  if (!(confidence > 0.0 && confidence < 1.0)) throw_config("bootstrap: confidence must lie in (0, 1)");
  if (max_attempts_factor < 1) throw_config("bootstrap: max_attempts_factor must be positive");
}

double percentile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw_contract("percentile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

ConfidenceInterval bootstrap_ci(const ResampleMetric& metric, std::span<const int> labels,
                                const BootstrapOptions& options, std::optional<double> point) {
  options.validate();
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] == 1 ? pos : neg).push_back(i);
  if (labels.empty()) throw_contract("bootstrap: empty input");
  Rng rng = make_rng(options.seed, "bootstrap");
  std::vector<double> values;
  values.reserve(options.n_resamples);
  std::vector<std::size_t> rows(labels.size());
  const std::size_t max_attempts = options.n_resamples * options.max_attempts_factor;
  std::size_t attempts = 0;
  while (values.size() < options.n_resamples && attempts < max_attempts) {
    ++attempts;
    std::size_t k = 0;
    for (const auto* cls : {&pos, &neg}) {
      if (cls->empty()) continue;
      std::uniform_int_distribution<std::size_t> pick(0, cls->size() - 1);
      for (std::size_t j = 0; j < cls->size(); ++j) rows[k++] = (*cls)[pick(rng)];
    }
    if (auto v = metric(rows)) {
      if (std::isfinite(*v)) values.push_back(*v);
    }
  }
  if (values.empty()) {
    throw_data(ErrorReason::kUndefinedMetric, "bootstrap: metric undefined on every resample");
  }
  std::sort(values.begin(), values.end());
  const double alpha = (1.0 - options.confidence) / 2.0;
  ConfidenceInterval ci{percentile_sorted(values, alpha), percentile_sorted(values, 1.0 - alpha),
                        values.size()};
  if (point) {
    ci.low = std::min(ci.low, *point);
    ci.high = std::max(ci.high, *point);
  }
  return ci;
}

ConfidenceInterval bootstrap_ci(
    const std::function<std::optional<double>(std::span<const double>, std::span<const int>)>& metric,
    std::span<const double> scores, std::span<const int> labels, const BootstrapOptions& options,
    std::optional<double> point) {
  if (scores.size() != labels.size()) throw_contract("bootstrap: scores and labels differ in length");
  std::vector<double> s(scores.size());
  std::vector<int> y(labels.size());
  auto on_rows = [&](std::span<const std::size_t> rows) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      s[i] = scores[rows[i]];
      y[i] = labels[rows[i]];
    }
    return metric(s, y);
  };
  return bootstrap_ci(on_rows, labels, options, point);
}

}  // namespace viskd::eval
