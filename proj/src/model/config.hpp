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

#include <cstddef>
#include <json.hpp>
#include <string>

#include "numerics/ops.hpp"

namespace viskd::model {

enum class MaskGranularity { kCell, kTimestep };
enum class NormPlacement { kPost, kPre };

struct EncoderConfig {
  std::size_t d_model = 64;
  std::size_t ffn_dim = 256;
  std::size_t n_heads = 8;
  std::size_t n_layers = 2;
  double dropout = 0.1;
  std::size_t seq_len = 48;
  std::size_t n_features = 7;
  double mask_ratio = 0.05;
  MaskGranularity mask_granularity = MaskGranularity::kCell;
  double head_dropout = 0.2;
  std::size_t head_hidden = 64;
  std::size_t static_full_dim = 51;
  std::size_t static_scorefree_dim = 47;
  std::size_t n_scores = 4;
  num::Activation activation = num::Activation::kRelu;
  NormPlacement norm_placement = NormPlacement::kPost;
  /// Off only in test configurations that probe permutation equivariance.
  bool positional_encoding = true;

  /// Throws a config error on any violated invariant.
  void validate() const;

  bool operator==(const EncoderConfig&) const = default;
};

nlohmann::ordered_json to_json(const EncoderConfig& c);
/// Rejects unknown keys; missing keys keep their defaults.
EncoderConfig encoder_config_from_json(const nlohmann::json& j);

const char* to_string(MaskGranularity g);
const char* to_string(NormPlacement p);
const char* to_string(num::Activation a);

}  // namespace viskd::model
