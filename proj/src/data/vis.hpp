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
#include <cstddef>
#include <span>
#include <string_view>

namespace viskd::data {

inline constexpr std::size_t kHours = 48;
inline constexpr std::size_t kAgents = 6;
inline constexpr std::size_t kVisColumns = kAgents + 1;

/// Column order of the dose matrix; column 7 is the total score.
inline constexpr std::array<std::string_view, kAgents> kAgentNames{
    "dopamine", "dobutamine", "epinephrine", "milrinone", "vasopressin", "norepinephrine"};

/// Potency multipliers, aligned with kAgentNames.
inline constexpr std::array<double, kAgents> kVisWeights{1.0, 1.0, 100.0, 10.0, 10000.0, 100.0};

/// dopamine + dobutamine + 100 epinephrine + 10 milrinone
///   + 100 norepinephrine + 10000 vasopressin.
/// Throws a validation error on negative or non-finite doses.
double compute_total_vis(std::span<const double, kAgents> doses);

}  // namespace viskd::data
