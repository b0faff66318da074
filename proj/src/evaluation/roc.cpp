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

#include "evaluation/roc.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "common/error.hpp"
#include "common/format.hpp"
#include "evaluation/metrics.hpp"

namespace viskd::eval {

std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const int> labels) {
  check_scored_labels(scores, labels);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  double n_pos = 0.0;
  for (int y : labels) n_pos += y;
  const double n_neg = static_cast<double>(labels.size()) - n_pos;
  if (n_pos == 0.0 || n_neg == 0.0) {
    throw_data(ErrorReason::kUndefinedMetric, "roc_curve: both classes must be present");
  }
  std::vector<RocPoint> curve{{0.0, 0.0, std::numeric_limits<double>::infinity()}};
  double tp = 0.0, fp = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      (labels[order[i]] == 1 ? tp : fp) += 1.0;
      ++i;
    }
    curve.push_back({fp / n_neg, tp / n_pos, s});
  }
  // The lowest distinct score admits every sample, so the last point is (1, 1).
  return curve;
}

double trapezoid_area(const std::vector<RocPoint>& curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    area += (curve[i].fpr - curve[i - 1].fpr) * (curve[i].tpr + curve[i - 1].tpr) / 2.0;
  }
  return area;
}

std::string roc_to_csv(const std::vector<RocPoint>& curve) {
  std::string out = "fpr,tpr\n";
  for (const RocPoint& p : curve) out += fmt::number(p.fpr) + "," + fmt::number(p.tpr) + "\n";
  return out;
}

}  // namespace viskd::eval
