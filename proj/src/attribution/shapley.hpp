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

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "data/encoding.hpp"
#include "data/prepared.hpp"
#include "model/model.hpp"
#include "numerics/tensor.hpp"

namespace viskd::attr {

/// Evaluates a scalar model output on each row of an [M, d] matrix.
using BatchFunction = std::function<std::vector<double>(const num::Tensor& inputs)>;

struct GroupShapley {
  std::vector<double> values;  // one per group
  double f_input = 0.0;
  double f_background = 0.0;
};

/// Permutation-sampling Shapley values with groups as atomic players: each
/// sampled order switches groups from `background` to `x` one at a time and
/// credits each group with the change in f. Every order telescopes to
/// f(x) - f(background), so the estimate is locally accurate by construction.
GroupShapley shapley_groups(const BatchFunction& f, std::span<const double> x,
                            std::span<const double> background,
                            const std::vector<data::FeatureGroup>& groups,
                            std::size_t n_permutations, std::uint64_t seed);

struct ShapleyOptions {
  std::size_t n_samples = 200;  // sampled orders per patient
  std::uint64_t seed = 42;
  std::size_t batch_size = 64;
  void validate() const;
};

struct AttributionResult {
  std::vector<std::string> feature_names;  // one per static dim
  std::vector<std::string> group_names;    // one per player
  std::vector<std::string> patient_ids;
  std::vector<std::size_t> rows;
  num::Tensor features;      // [N, dims], explained inputs
  num::Tensor values;        // [N, dims]; a group's value sits on its active dim
  num::Tensor group_values;  // [N, groups]
  std::vector<double> predictions;  // f(x)
  std::vector<double> base_values;  // f(background)
  std::vector<double> background;
  std::string background_description;
  std::vector<double> mean_abs;  // per dim
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;

  /// max over patients of |sum(values) - (f(x) - f(background))|.
  double max_local_accuracy_gap() const;
};

/// Train-split median for continuous dims and train-split mode for one-hot
/// groups.
std::vector<double> static_background(const data::PreparedData& data,
                                      const std::vector<data::FeatureGroup>& groups);

/// Attributions of the positive-class probability to the static features of
/// `rows`, with each patient's VIS series (and so the CLS embedding) fixed.
/// Requires a student-stage model.
AttributionResult shapley_static(const model::Model& model, const data::PreparedData& data,
                                 const std::vector<std::size_t>& rows, const ShapleyOptions& options);

struct RankedFeature {
  std::string name;
  double mean_abs = 0.0;
};

/// Descending mean absolute attribution; ties by name.
std::vector<RankedFeature> rank_features(const AttributionResult& result);

nlohmann::ordered_json attribution_to_json(const AttributionResult& result);
/// feature,mean_abs_shap in rank order.
std::string attribution_summary_csv(const AttributionResult& result);
/// patient_id,feature,feature_value,shap_value for every patient and dim.
std::string attribution_long_csv(const AttributionResult& result);

}  // namespace viskd::attr
