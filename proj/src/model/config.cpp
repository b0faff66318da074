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

#include "model/config.hpp"

#include <cmath>

#include "common/error.hpp"

namespace viskd::model {

void EncoderConfig::validate() const {
  if (d_model == 0 || n_heads == 0 || d_model % n_heads != 0) {
    throw_config("model: d_model must be a positive multiple of n_heads");
  }
  if (d_model % 2 != 0) throw_config("model: d_model must be even for the sinusoidal table");
  if (ffn_dim == 0 || n_layers == 0 || seq_len == 0 || n_features == 0 || head_hidden == 0) {
    throw_config("model: dimensions must be positive");
  }
  if (!(mask_ratio > 0.0 && mask_ratio < 1.0)) throw_config("model: mask_ratio must lie in (0, 1)");
  if (!(dropout >= 0.0 && dropout < 1.0) || !(head_dropout >= 0.0 && head_dropout < 1.0)) {
    throw_config("model: dropout rates must lie in [0, 1)");
  }
  if (static_scorefree_dim + n_scores != static_full_dim) {
    throw_config("model: static_full_dim must equal static_scorefree_dim + n_scores");
  }
}

const char* to_string(MaskGranularity g) {
  return g == MaskGranularity::kCell ? "cell" : "timestep";
}
const char* to_string(NormPlacement p) { return p == NormPlacement::kPost ? "post" : "pre"; }
const char* to_string(num::Activation a) { return a == num::Activation::kRelu ? "relu" : "gelu"; }

nlohmann::ordered_json to_json(const EncoderConfig& c) {
  nlohmann::ordered_json j;
  j["d_model"] = c.d_model;
  j["ffn_dim"] = c.ffn_dim;
  j["n_heads"] = c.n_heads;
  j["n_layers"] = c.n_layers;
  j["dropout"] = c.dropout;
  j["seq_len"] = c.seq_len;
  j["n_features"] = c.n_features;
  j["mask_ratio"] = c.mask_ratio;
  j["mask_granularity"] = to_string(c.mask_granularity);
  j["head_dropout"] = c.head_dropout;
  j["head_hidden"] = c.head_hidden;
  j["static_full_dim"] = c.static_full_dim;
  j["static_scorefree_dim"] = c.static_scorefree_dim;
  j["n_scores"] = c.n_scores;
  j["activation"] = to_string(c.activation);
  j["norm_placement"] = to_string(c.norm_placement);
  j["positional_encoding"] = c.positional_encoding;
  return j;
}

EncoderConfig encoder_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw_config("model config must be an object");
  EncoderConfig c;
  for (const auto& item : j.items()) {
    const std::string& k = item.key();
    const auto& v = item.value();
    try {
      if (k == "d_model") c.d_model = v.get<std::size_t>();
      else if (k == "ffn_dim") c.ffn_dim = v.get<std::size_t>();
      else if (k == "n_heads") c.n_heads = v.get<std::size_t>();
      else if (k == "n_layers") c.n_layers = v.get<std::size_t>();
      else if (k == "dropout") c.dropout = v.get<double>();
      else if (k == "seq_len") c.seq_len = v.get<std::size_t>();
      else if (k == "n_features") c.n_features = v.get<std::size_t>();
      else if (k == "mask_ratio") c.mask_ratio = v.get<double>();
      else if (k == "head_dropout") c.head_dropout = v.get<double>();
      else if (k == "head_hidden") c.head_hidden = v.get<std::size_t>();
      else if (k == "static_full_dim") c.static_full_dim = v.get<std::size_t>();
      else if (k == "static_scorefree_dim") c.static_scorefree_dim = v.get<std::size_t>();
      else if (k == "n_scores") c.n_scores = v.get<std::size_t>();
      else if (k == "positional_encoding") c.positional_encoding = v.get<bool>();
      else if (k == "mask_granularity") {
        const auto s = v.get<std::string>();
        if (s == "cell") c.mask_granularity = MaskGranularity::kCell;
        else if (s == "timestep") c.mask_granularity = MaskGranularity::kTimestep;
        else throw_config("model.mask_granularity must be 'cell' or 'timestep'");
      } else if (k == "activation") {
        const auto s = v.get<std::string>();
        if (s == "relu") c.activation = num::Activation::kRelu;
        else if (s == "gelu") c.activation = num::Activation::kGelu;
        else throw_config("model.activation must be 'relu' or 'gelu'");
      } else if (k == "norm_placement") {
        const auto s = v.get<std::string>();
        if (s == "post") c.norm_placement = NormPlacement::kPost;
        else if (s == "pre") c.norm_placement = NormPlacement::kPre;
        else throw_config("model.norm_placement must be 'post' or 'pre'");
      } else {
        throw_config("unknown key 'model." + k + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw_config("model." + k + ": " + e.what());
    }
  }
  c.validate();
  return c;
}

}  // namespace viskd::model
