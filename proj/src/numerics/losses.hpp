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
#include <optional>
#include <span>
#include <vector>

#include "numerics/tape.hpp"

namespace viskd::num {

/// Per-cell selection mask; nonzero means selected.
using CellMask = std::vector<std::uint8_t>;

/// mean_i w[y_i] * -log softmax(z_i)[y_i] over logits [B, 2]. Uses a
/// log-sum-exp formulation.
Var weighted_cross_entropy(Var logits, std::span<const int> labels,
                           const std::array<double, 2>& class_weights);
double weighted_cross_entropy(const Tensor& logits, std::span<const int> labels,
                              const std::array<double, 2>& class_weights);

/// Mean squared difference over the selected cells (all cells when `mask`
/// is empty). An all-false mask is a degenerate-mask error.
Var mse(Var pred, Var target, std::span<const std::uint8_t> mask = {});
double mse(const Tensor& pred, const Tensor& target,
           std::span<const std::uint8_t> mask = {});

}  // namespace viskd::num
