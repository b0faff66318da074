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
#include <map>
#include <string>
#include <vector>

#include "common/rng.hpp"
#include "model/config.hpp"
#include "model/mask.hpp"
#include "numerics/tape.hpp"
#include "numerics/tensor.hpp"

namespace viskd::model {

enum class Stage { kMae, kTeacher, kStudent };

const char* to_string(Stage stage);
Stage stage_from_string(const std::string& s);

/// Encoder, reconstruction decoder, and both task heads. Parameter names:
///   encoder.input_proj.{weight,bias}, encoder.cls_token,
///   encoder.layers.<l>.{attn.{q,k,v,out},ffn.{fc1,fc2}}.{weight,bias},
///   encoder.layers.<l>.{norm1,norm2}.{gamma,beta},
///   decoder.proj.{weight,bias}, {cls_head,reg_head}.{fc1,fc2}.{weight,bias}
/// Weights are stored [in, out].
struct Model {
  EncoderConfig config;
  Stage stage = Stage::kMae;
  num::NamedTensors params;
  /// Fixed sinusoidal table [seq_len, d_model]; zeros when disabled.
  num::Tensor positional;
  /// Set on teachers; training code refuses to update a frozen model.
  bool frozen = false;
};

num::Tensor positional_encoding(std::size_t seq_len, std::size_t d_model);

/// Expected shape of every learnable parameter.
std::map<std::string, num::Shape> parameter_shapes(const EncoderConfig& config);

/// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights and biases, unit
/// layer-norm gains. Each parameter draws from its own named substream.
Model init_model(const EncoderConfig& config, Stage stage, std::uint64_t seed);

/// Re-draws only the parameters whose names start with `prefix`.
void reinit_parameters(Model& model, const std::string& prefix, std::uint64_t seed);

/// Throws a contract error if a parameter is missing, extra, or misshapen.
void validate_shapes(const Model& model);

/// Digest over names, shapes and raw parameter bytes.
std::string parameter_fingerprint(const Model& model);

/// Parameters recorded on a tape for one forward pass.
class Bound {
 public:
  /// `trainable` selects which parameters require grad (all when empty).
  Bound(num::Tape& tape, const Model& model, bool requires_grad,
        const std::function<bool(const std::string&)>& trainable = {});
  /// Uses variables already recorded on `tape`, one per parameter.
  Bound(num::Tape& tape, const Model& model, std::map<std::string, num::Var> vars);

  num::Var operator[](const std::string& name) const;
  const std::map<std::string, num::Var>& vars() const { return vars_; }
  num::Tape& tape() const { return *tape_; }
  const Model& model() const { return *model_; }

  /// Gradients of every parameter that received one.
  num::NamedTensors gradients() const;

 private:
  num::Tape* tape_;
  const Model* model_;
  std::map<std::string, num::Var> vars_;
};

struct ForwardMode {
  bool train = false;
  Rng* rng = nullptr;  // dropout stream; required when train is true
};

/// Pre-attention token embeddings [B, T + 1, D]: masked cells zeroed, linear
/// projection, positional table added to data tokens, CLS at position 0.
num::Var embed_tokens(const Bound& p, const num::Tensor& x, const MaskPlan* mask);

/// [B, T, F] -> latent [B, T + 1, D]; position 0 is the CLS summary.
num::Var encoder_forward(const Bound& p, const num::Tensor& x, const MaskPlan* mask,
                         ForwardMode mode);

/// Drops the CLS position and maps each token 64 -> 7: [B, T, F].
num::Var decoder_forward(const Bound& p, num::Var latent);

/// latent[:, 0, :] as [B, D].
num::Var cls_embedding(num::Var latent);

/// concat(cls, static_full) -> fc1 -> activation -> dropout -> fc2: [B, 2].
num::Var classify_head(const Bound& p, num::Var cls, const num::Tensor& static_full,
                       ForwardMode mode);

/// concat(cls, static_scorefree) -> fc1 -> activation -> dropout -> fc2: [B, 4].
num::Var regress_head(const Bound& p, num::Var cls, const num::Tensor& static_scorefree,
                      ForwardMode mode);

struct Predictions {
  num::Tensor logits;      // [N, 2]
  num::Tensor regression;  // [N, 4]
  std::vector<double> prob_positive;
  num::Tensor cls;         // [N, D]
};

/// Eval-mode inference in batches of `batch_size`.
Predictions predict(const Model& model, const num::Tensor& vis, const num::Tensor& static_full,
                    const num::Tensor& static_scorefree, std::size_t batch_size = 64);

}  // namespace viskd::model
