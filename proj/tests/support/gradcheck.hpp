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

#include <functional>
#include <string>
#include <vector>

#include "common/rng.hpp"
#include "numerics/ops.hpp"

namespace viskd::testing {

/// Builds a scalar from leaf variables recorded on `tape`.
using ScalarFn = std::function<num::Var(num::Tape& tape, const std::vector<num::Var>& inputs)>;

struct GradCheck {
  double max_rel_error = 0.0;
  std::string worst;  // "input[i][j]: analytic a, numeric n"
  std::size_t checked = 0;
};

/// |a - n| / max(|a|, |n|, floor).
double relative_error(double analytic, double numeric, double floor = 1e-6);

/// Compares reverse-mode gradients of every input entry with central
/// differences of step `eps`.
GradCheck gradcheck(const ScalarFn& f, const std::vector<num::Tensor>& inputs, double eps = 1e-5);

num::Tensor random_tensor(const num::Shape& shape, Rng& rng, double scale = 1.0);

/// sum(op * weights) with fixed random weights, turning any op output into
/// a scalar whose gradient touches every element.
num::Var random_projection(num::Var v, std::uint64_t seed);

}  // namespace viskd::testing
