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

#include "numerics/tensor.hpp"

namespace viskd::num {

struct AdamWOptions {
  double learning_rate = 1e-3;
  double weight_decay = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
};

/// Optimizer state. Moments are keyed by parameter name and created lazily
/// with the parameter's shape on the first step that touches it.
struct AdamWState {
  AdamWOptions options;
  NamedTensors first_moment;
  NamedTensors second_moment;
  std::int64_t step = 0;
};

/// One decoupled-weight-decay Adam update:
///   p <- p - lr * wd * p
///   m <- b1 m + (1 - b1) g,   v <- b2 v + (1 - b2) g^2
///   p <- p - lr * m_hat / (sqrt(v_hat) + eps)
/// Parameters without an entry in `grads` are left untouched.
void adamw_step(NamedTensors& params, const NamedTensors& grads, AdamWState& state);

}  // namespace viskd::num
