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

#include "data/vis.hpp"

#include <cmath>
#include <string>

#include "common/error.hpp"

namespace viskd::data {

double compute_total_vis(std::span<const double, kAgents> doses) {
  double total = 0.0;
  for (std::size_t a = 0; a < kAgents; ++a) {
    if (!std::isfinite(doses[a]) || doses[a] < 0.0) {
      throw_data(ErrorReason::kValidation,
                 "invalid " + std::string(kAgentNames[a]) + " dose " +
                     std::to_string(doses[a]));
    }
    total += kVisWeights[a] * doses[a];
  }
  return total;
}

}  // namespace viskd::data
