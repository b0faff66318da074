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

#include <string>
#include <vector>

#include "model/model.hpp"
#include "support/gradcheck.hpp"

namespace viskd::testing {

struct GradCase {
  std::string name;
  ScalarFn fn;
  std::vector<num::Tensor> inputs;
};

/// Every differentiable primitive on `trials` random small inputs each.
std::vector<GradCase> primitive_grad_cases(std::size_t trials, std::uint64_t seed);

/// Small encoder configuration used by composed-model checks.
model::EncoderConfig tiny_config();

/// Encoder, decoder and both heads on a 2-sample batch, differentiated with
/// respect to every model parameter. The loss sums the reconstruction,
/// classification, regression and distillation terms in train mode with a
/// fixed dropout stream.
GradCase full_model_case(std::uint64_t seed);

struct SuiteSummary {
  double max_rel_error = 0.0;
  std::string worst_case;
  std::size_t cases = 0;
  std::size_t entries = 0;
};

SuiteSummary run_cases(const std::vector<GradCase>& cases, double eps = 1e-5);

}  // namespace viskd::testing
