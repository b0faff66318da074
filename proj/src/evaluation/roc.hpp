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

#include <span>
#include <string>
#include <vector>

namespace viskd::eval {

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  /// Score cut producing this point; +inf for the (0, 0) endpoint.
  double threshold = 0.0;
};

/// (0, 0) followed by one point per distinct score, ordered by decreasing
/// threshold; the last point is (1, 1).
std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const int> labels);

double trapezoid_area(const std::vector<RocPoint>& curve);

/// "fpr,tpr" header and one row per point.
std::string roc_to_csv(const std::vector<RocPoint>& curve);

}  // namespace viskd::eval
