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
#include <span>
#include <string>
#include <vector>

namespace viskd::data {

struct SplitIndices {
  int format_version = 1;
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
  std::uint64_t seed = 0;

  /// Stable digest of the three index lists.
  std::string fingerprint() const;

  bool operator==(const SplitIndices&) const = default;
};

inline constexpr std::array<double, 3> kDefaultSplitFractions{0.72, 0.08, 0.20};

/// Split sizes are apportioned from the fractions by largest remainder, then
/// each split's positive count is apportioned from (global positive rate x
/// split size), so every split is within one patient of both targets.
/// Index lists are sorted ascending.
SplitIndices stratified_split(std::span<const int> labels,
                              const std::array<double, 3>& fractions,
                              std::uint64_t seed);

/// weight_c = |train| / (2 * count_c).
std::array<double, 2> compute_class_weights(std::span<const int> train_labels);

std::string split_to_json(const SplitIndices& split);
SplitIndices split_from_json(const std::string& text);

}  // namespace viskd::data
