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

#include "evaluation/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "common/error.hpp"

namespace viskd::eval {
namespace {

std::optional<double> ratio(double num, double den) {
  if (den == 0.0) return std::nullopt;
  return num / den;
}

}  // namespace

void check_scored_labels(std::span<const double> scores, std::span<const int> labels) {
  if (scores.empty()) throw_contract("metrics: empty input");
  if (scores.size() != labels.size()) {
    throw_contract("metrics: " + std::to_string(scores.size()) + " scores but " +
                   std::to_string(labels.size()) + " labels");
  }
  for (int y : labels) {
    if (y != 0 && y != 1) throw_data(ErrorReason::kLabel, "metrics: label must be 0 or 1");
  }
  for (double s : scores) {
    if (!std::isfinite(s)) throw_numeric_input("metrics: non-finite score");
  }
}

ConfusionCounts confusion_at_threshold(std::span<const double> scores, std::span<const int> labels,
                                       double threshold) {
  check_scored_labels(scores, labels);
  ConfusionCounts c;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    if (labels[i] == 1) {
      ++(predicted ? c.tp : c.fn);
    } else {
      ++(predicted ? c.fp : c.tn);
    }
  }
  return c;
}

BinaryMetrics binary_metrics(const ConfusionCounts& c) {
  const double tp = static_cast<double>(c.tp), tn = static_cast<double>(c.tn);
  const double fp = static_cast<double>(c.fp), fn = static_cast<double>(c.fn);
  BinaryMetrics m;
  m.ppv = ratio(tp, tp + fp);
  m.npv = ratio(tn, tn + fn);
  m.sensitivity = ratio(tp, tp + fn);
  m.specificity = ratio(tn, tn + fp);
  if (m.sensitivity && m.specificity) {
    m.plr = ratio(*m.sensitivity, 1.0 - *m.specificity);
    m.nlr = ratio(1.0 - *m.sensitivity, *m.specificity);
  }
  m.accuracy = ratio(tp + tn, tp + tn + fp + fn);
  return m;
}

std::optional<double> try_auroc(std::span<const double> scores, std::span<const int> labels) {
  check_scored_labels(scores, labels);
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double positive_rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    // Ranks i+1..j share their average.
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) {
        positive_rank_sum += avg_rank;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) return std::nullopt;
  const double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
  return (positive_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

double auroc(std::span<const double> scores, std::span<const int> labels) {
  auto a = try_auroc(scores, labels);
  if (!a) throw_data(ErrorReason::kUndefinedMetric, "auroc: both classes must be present");
  return *a;
}

R2Result r2_score(const num::Tensor& pred, const num::Tensor& target) {
  if (pred.shape() != target.shape() || pred.rank() != 2) {
    throw_contract("r2_score: pred and target must be matching [N, K] matrices, got " +
                   num::shape_to_string(pred.shape()) + " and " +
                   num::shape_to_string(target.shape()));
  }
  const std::size_t n = pred.dim(0), k = pred.dim(1);
  if (n < 2) throw_contract("r2_score: at least 2 samples are required");
  R2Result r;
  double sum = 0.0;
  std::size_t defined = 0;
  for (std::size_t d = 0; d < k; ++d) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += target[i * k + d];
    mean /= static_cast<double>(n);
    double ss_tot = 0.0, ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = target[i * k + d];
      ss_tot += (t - mean) * (t - mean);
      ss_res += (t - pred[i * k + d]) * (t - pred[i * k + d]);
    }
    if (ss_tot == 0.0) {
      r.per_dim.emplace_back();
      continue;
    }
    const double v = 1.0 - ss_res / ss_tot;
    r.per_dim.emplace_back(v);
    sum += v;
    ++defined;
  }
  if (defined > 0) r.mean = sum / static_cast<double>(defined);
  return r;
}

double choose_threshold(std::span<const double> scores, std::span<const int> labels) {
  check_scored_labels(scores, labels);
  std::vector<double> values(scores.begin(), scores.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::size_t n_pos = 0;
  for (int y : labels) n_pos += static_cast<std::size_t>(y);
  const std::size_t n_neg = labels.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw_data(ErrorReason::kUndefinedMetric, "choose_threshold: both classes must be present");
  }
  // Candidate i predicts positive for scores >= values[i]; candidate m
  // (past the end) predicts nothing positive.
  std::vector<std::pair<double, int>> by_score(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) by_score[i] = {scores[i], labels[i]};
  std::sort(by_score.begin(), by_score.end());
  double best_j = -std::numeric_limits<double>::infinity();
  std::size_t best = 0;
  std::size_t below_pos = 0, below_neg = 0, cursor = 0;
  for (std::size_t i = 0; i <= values.size(); ++i) {
    if (i == values.size()) {
      below_pos = n_pos;
      below_neg = n_neg;
    } else {
      while (cursor < by_score.size() && by_score[cursor].first < values[i]) {
        ++(by_score[cursor].second == 1 ? below_pos : below_neg);
        ++cursor;
      }
    }
    const double sens = static_cast<double>(n_pos - below_pos) / static_cast<double>(n_pos);
    const double spec = static_cast<double>(below_neg) / static_cast<double>(n_neg);
    const double j = sens + spec - 1.0;
    if (j > best_j) {
      best_j = j;
      best = i;
    }
  }
  if (best == values.size()) return std::nextafter(values.back(), std::numeric_limits<double>::infinity());
  if (best == 0) return values[0];
  const double mid = 0.5 * (values[best - 1] + values[best]);
  return mid > values[best - 1] && mid <= values[best] ? mid : values[best];
}

}  // namespace viskd::eval
