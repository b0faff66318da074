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

#include <json.hpp>

#include "numerics/tensor.hpp"

namespace viskd::num {

/// {"shape": [...], "values": [...]} with row-major values. Doubles are
/// written in shortest round-trip form, so load(save(t)) == t bit-exactly.
nlohmann::ordered_json tensor_to_json(const Tensor& t);
Tensor tensor_from_json(const nlohmann::json& j);
Tensor tensor_from_json(const nlohmann::ordered_json& j);

}  // namespace viskd::num
