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

#include "numerics/tensor_io.hpp"

#include "common/error.hpp"

namespace viskd::num {

nlohmann::ordered_json tensor_to_json(const Tensor& t) {
  if (!t.all_finite()) throw_contract("cannot serialize a tensor with non-finite values");
  nlohmann::ordered_json j;
  j["shape"] = t.shape();
  j["values"] = t.storage();
  return j;
}

namespace {

template <class J>
Tensor from_json_impl(const J& j) {
  try {
    auto shape = j.at("shape").template get<Shape>();
    auto values = j.at("values").template get<std::vector<double>>();
    return Tensor(std::move(shape), std::move(values));
  } catch (const nlohmann::json::exception& e) {
    throw_data(ErrorReason::kSchema, std::string("tensor: ") + e.what());
  }
}

}  // namespace

Tensor tensor_from_json(const nlohmann::json& j) { return from_json_impl(j); }
Tensor tensor_from_json(const nlohmann::ordered_json& j) { return from_json_impl(j); }

}  // namespace viskd::num
