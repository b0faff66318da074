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

#include "numerics/adamw.hpp"

#include <cmath>

#include "common/error.hpp"

namespace viskd::num {

void AdamWOptions::validate() const {
  if (learning_rate < 0.0 || weight_decay < 0.0) {
    throw_config("adamw: learning rate and weight decay must be nonnegative");
  }
  if (!(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0)) {
    throw_config("adamw: betas must lie in (0, 1)");
  }
  if (!(epsilon > 0.0)) throw_config("adamw: epsilon must be positive");
}

void adamw_step(NamedTensors& params, const NamedTensors& grads, AdamWState& state) {
  const AdamWOptions& o = state.options;
  for (const auto& [name, g] : grads) {
    auto it = params.find(name);
    if (it == params.end()) throw_contract("adamw: gradient for unknown parameter " + name);
    if (it->second.shape() != g.shape()) {
      throw_contract("adamw: shape mismatch for " + name + ": " +
                     shape_to_string(it->second.shape()) + " vs " +
                     shape_to_string(g.shape()));
    }
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(o.beta1, t);
  const double bc2 = 1.0 - std::pow(o.beta2, t);
  for (const auto& [name, g] : grads) {
    Tensor& p = params.at(name);
    auto mit = state.first_moment.try_emplace(name, p.shape(), 0.0).first;
    auto vit = state.second_moment.try_emplace(name, p.shape(), 0.0).first;
    if (mit->second.shape() != p.shape() || vit->second.shape() != p.shape()) {
      throw_contract("adamw: moment shape mismatch for " + name);
    }
    auto& pv = p.storage();
    auto& m = mit->second.storage();
    auto& v = vit->second.storage();
    const auto& gv = g.storage();
    for (std::size_t i = 0; i < pv.size(); ++i) {
      pv[i] -= o.learning_rate * o.weight_decay * pv[i];
      m[i] = o.beta1 * m[i] + (1.0 - o.beta1) * gv[i];
      v[i] = o.beta2 * v[i] + (1.0 - o.beta2) * gv[i] * gv[i];
      const double m_hat = m[i] / bc1;
      const double v_hat = v[i] / bc2;
      pv[i] -= o.learning_rate * m_hat / (std::sqrt(v_hat) + o.epsilon);
    }
  }
}

}  // namespace viskd::num
