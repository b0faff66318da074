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
#include <filesystem>
#include <string>
#include <vector>

#include "data/cohort.hpp"
#include "data/preprocess.hpp"
#include "data/split.hpp"
#include "numerics/tensor.hpp"

namespace viskd::data {

/// Model-ready cohort: every tensor is indexed by patient position in the
/// source cohort file.
struct PreparedData {
  std::vector<std::string> patient_ids;
  std::vector<int> labels;
  num::Tensor vis;               // [N, 48, 7], normalized
  num::Tensor static_full;       // [N, 51]
  num::Tensor static_scorefree;  // [N, 47]
  num::Tensor score_targets;     // [N, 4], z-scored
  SplitIndices split;
  PreprocessStats stats;
  std::array<double, 2> class_weights{1.0, 1.0};

  std::size_t size() const { return labels.size(); }
  std::vector<int> labels_at(std::span<const std::size_t> rows) const;
};

/// split -> fit on train -> impute -> normalize -> encode -> class weights.
PreparedData prepare_cohort(const std::vector<PatientRecord>& records,
                            const std::array<double, 3>& split_fractions,
                            std::uint64_t split_seed);

/// Writes vis_series.json, static_features.json, preprocess_stats.json,
/// splits.json and class_weights.json into `dir`.
void save_prepared(const PreparedData& data, const std::filesystem::path& dir);
PreparedData load_prepared(const std::filesystem::path& dir);

}  // namespace viskd::data
