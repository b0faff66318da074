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

#include "model/model.hpp"

#include <cmath>
#include <cstring>

#include "common/error.hpp"
#include "common/io.hpp"
#include "numerics/ops.hpp"

namespace viskd::model {
namespace {

std::string layer_prefix(std::size_t l) { return "encoder.layers." + std::to_string(l) + "."; }

void add_linear(std::map<std::string, num::Shape>& s, const std::string& name, std::size_t in,
                std::size_t out) {
  s[name + ".weight"] = {in, out};
  s[name + ".bias"] = {out};
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

num::Tensor init_tensor(const std::string& name, const num::Shape& shape, std::uint64_t seed) {
  num::Tensor t(shape);
  if (ends_with(name, ".gamma")) {
    for (double& v : t.storage()) v = 1.0;
    return t;
  }
  if (ends_with(name, ".beta")) return t;
  // Weights are [in, out]; the CLS embedding uses its width.
  double fan_in = static_cast<double>(shape.back());
  if (shape.size() == 2 && !ends_with(name, "cls_token")) fan_in = static_cast<double>(shape[0]);
  Rng rng(derive_seed(seed, "init/" + name));
  const double bound = 1.0 / std::sqrt(fan_in);
  for (double& v : t.storage()) v = (2.0 * uniform01(rng) - 1.0) * bound;
  return t;
}

num::Var row_tile(num::Tape& tape, const num::Tensor& table, std::size_t batch) {
  num::Tensor out({batch, table.dim(0), table.dim(1)});
  for (std::size_t b = 0; b < batch; ++b) {
    std::copy(table.data().begin(), table.data().end(),
              out.data().begin() + static_cast<std::ptrdiff_t>(b * table.numel()));
  }
  return tape.constant(std::move(out));
}

num::Var head(const Bound& p, const std::string& name, num::Var cls, const num::Tensor& stat,
              std::size_t expected_dim, ForwardMode mode) {
  const EncoderConfig& c = p.model().config;
  const std::size_t B = cls.shape()[0];
  if (stat.shape() != num::Shape{B, expected_dim}) {
    throw_contract(name + ": static features must be [" + std::to_string(B) + ", " +
                   std::to_string(expected_dim) + "], got " + num::shape_to_string(stat.shape()));
  }
  num::Var x = num::concat({cls, p.tape().constant(stat)}, 1);
  num::Var h = num::activate(num::linear(x, p[name + ".fc1.weight"], p[name + ".fc1.bias"]), c.activation);
  if (mode.train && c.head_dropout > 0.0 && !mode.rng) throw_contract("train mode needs a dropout rng");
  Rng unused;
  h = num::dropout(h, c.head_dropout, mode.train, mode.rng ? *mode.rng : unused);
  return num::linear(h, p[name + ".fc2.weight"], p[name + ".fc2.bias"]);
}

}  // namespace

const char* to_string(Stage stage) {
  switch (stage) {
    case Stage::kMae: return "mae";
    case Stage::kTeacher: return "teacher";
    case Stage::kStudent: return "student";
  }
  return "unknown";
}

Stage stage_from_string(const std::string& s) {
  if (s == "mae") return Stage::kMae;
  if (s == "teacher") return Stage::kTeacher;
  if (s == "student") return Stage::kStudent;
  throw_data(ErrorReason::kSchema, "unknown checkpoint stage '" + s + "'");
}

num::Tensor positional_encoding(std::size_t seq_len, std::size_t d_model) {
  if (d_model % 2 != 0) throw_config("positional encoding needs an even d_model");
  num::Tensor pe({seq_len, d_model});
  for (std::size_t pos = 0; pos < seq_len; ++pos) {
    for (std::size_t i = 0; i < d_model / 2; ++i) {
      const double angle = static_cast<double>(pos) /
                           std::pow(10000.0, static_cast<double>(2 * i) / static_cast<double>(d_model));
      pe[pos * d_model + 2 * i] = std::sin(angle);
      pe[pos * d_model + 2 * i + 1] = std::cos(angle);
    }
  }
  return pe;
}

std::map<std::string, num::Shape> parameter_shapes(const EncoderConfig& c) {
  std::map<std::string, num::Shape> s;
  const std::size_t D = c.d_model;
  add_linear(s, "encoder.input_proj", c.n_features, D);
  s["encoder.cls_token"] = {1, D};
  for (std::size_t l = 0; l < c.n_layers; ++l) {
    const std::string pre = layer_prefix(l);
    for (const char* m : {"attn.q", "attn.k", "attn.v", "attn.out"}) add_linear(s, pre + m, D, D);
    add_linear(s, pre + "ffn.fc1", D, c.ffn_dim);
    add_linear(s, pre + "ffn.fc2", c.ffn_dim, D);
    for (const char* n : {"norm1", "norm2"}) {
      s[pre + n + ".gamma"] = {D};
      s[pre + n + ".beta"] = {D};
    }
  }
  add_linear(s, "decoder.proj", D, c.n_features);
  add_linear(s, "cls_head.fc1", D + c.static_full_dim, c.head_hidden);
  add_linear(s, "cls_head.fc2", c.head_hidden, 2);
  add_linear(s, "reg_head.fc1", D + c.static_scorefree_dim, c.head_hidden);
  add_linear(s, "reg_head.fc2", c.head_hidden, c.n_scores);
  return s;
}

Model init_model(const EncoderConfig& config, Stage stage, std::uint64_t seed) {
  config.validate();
  Model m;
  m.config = config;
  m.stage = stage;
  const auto shapes = parameter_shapes(config);
  for (const auto& [name, shape] : shapes) {
    // Biases take the fan-in of their weight.
    if (ends_with(name, ".bias")) {
      const std::string wname = name.substr(0, name.size() - 5) + ".weight";
      num::Tensor t(shape);
      Rng rng(derive_seed(seed, "init/" + name));
      const double bound = 1.0 / std::sqrt(static_cast<double>(shapes.at(wname)[0]));
      for (double& v : t.storage()) v = (2.0 * uniform01(rng) - 1.0) * bound;
      m.params.emplace(name, std::move(t));
    } else {
      m.params.emplace(name, init_tensor(name, shape, seed));
    }
  }
  m.positional = config.positional_encoding ? positional_encoding(config.seq_len, config.d_model)
                                            : num::Tensor({config.seq_len, config.d_model});
  return m;
}

void reinit_parameters(Model& model, const std::string& prefix, std::uint64_t seed) {
  const Model fresh = init_model(model.config, model.stage, seed);
  for (auto& [name, t] : model.params) {
    if (name.rfind(prefix, 0) == 0) t = fresh.params.at(name);
  }
}

void validate_shapes(const Model& model) {
  const auto shapes = parameter_shapes(model.config);
  for (const auto& [name, shape] : shapes) {
    auto it = model.params.find(name);
    if (it == model.params.end()) throw_contract("missing parameter " + name);
    if (it->second.shape() != shape) {
      throw_contract("parameter " + name + " has shape " + num::shape_to_string(it->second.shape()) +
                     ", expected " + num::shape_to_string(shape));
    }
  }
  if (model.params.size() != shapes.size()) throw_contract("model has unexpected parameters");
  if (model.positional.shape() != num::Shape{model.config.seq_len, model.config.d_model}) {
    throw_contract("positional table has the wrong shape");
  }
}

std::string parameter_fingerprint(const Model& model) {
  std::string bytes;
  for (const auto& [name, t] : model.params) {
    bytes += name;
    bytes += num::shape_to_string(t.shape());
    const auto* raw = reinterpret_cast<const char*>(t.data().data());
    bytes.append(raw, t.numel() * sizeof(double));
  }
  return io::fingerprint(bytes);
}

Bound::Bound(num::Tape& tape, const Model& model, bool requires_grad,
             const std::function<bool(const std::string&)>& trainable)
    : tape_(&tape), model_(&model) {
  for (const auto& [name, t] : model.params) {
    const bool rg = requires_grad && (!trainable || trainable(name));
    vars_.emplace(name, tape.leaf(t, rg));
  }
}

Bound::Bound(num::Tape& tape, const Model& model, std::map<std::string, num::Var> vars)
    : tape_(&tape), model_(&model), vars_(std::move(vars)) {
  for (const auto& [name, t] : model.params) {
    auto it = vars_.find(name);
    if (it == vars_.end()) throw_contract("missing variable for parameter " + name);
    if (it->second.tape() != &tape || it->second.shape() != t.shape()) {
      throw_contract("variable for " + name + " does not match the parameter");
    }
  }
  if (vars_.size() != model.params.size()) throw_contract("unexpected variables bound to the model");
}

num::Var Bound::operator[](const std::string& name) const {
  auto it = vars_.find(name);
  if (it == vars_.end()) throw_contract("unknown parameter " + name);
  return it->second;
}

num::NamedTensors Bound::gradients() const {
  num::NamedTensors g;
  for (const auto& [name, v] : vars_) {
    if (const num::Tensor* t = v.grad()) g.emplace(name, *t);
  }
  return g;
}

num::Var embed_tokens(const Bound& p, const num::Tensor& x, const MaskPlan* mask) {
  const EncoderConfig& c = p.model().config;
  const std::size_t T = c.seq_len, F = c.n_features, D = c.d_model;
  if (x.rank() != 3 || x.dim(1) != T || x.dim(2) != F) {
    throw_contract("encoder input must be [B, " + std::to_string(T) + ", " + std::to_string(F) +
                   "], got " + num::shape_to_string(x.shape()));
  }
  const std::size_t B = x.dim(0);
  num::Tensor input = x;
  if (mask) {
    if (mask->batch != B || mask->seq_len != T || mask->n_features != F) {
      throw_contract("mask plan does not match the input batch");
    }
    for (std::size_t i = 0; i < input.numel(); ++i) {
      if (mask->cells[i]) input[i] = 0.0;
    }
  }
  num::Tape& tape = p.tape();
  num::Var proj = num::linear(tape.constant(std::move(input)), p["encoder.input_proj.weight"],
                              p["encoder.input_proj.bias"]);
  proj = num::add(proj, row_tile(tape, p.model().positional, B));
  std::vector<std::size_t> zeros(B, 0);
  num::Var cls = num::reshape(num::embedding(p["encoder.cls_token"], zeros), {B, 1, D});
  return num::concat({cls, proj}, 1);
}

num::Var encoder_forward(const Bound& p, const num::Tensor& x, const MaskPlan* mask,
                         ForwardMode mode) {
  const EncoderConfig& c = p.model().config;
  if (mode.train && c.dropout > 0.0 && !mode.rng) throw_contract("train mode needs a dropout rng");
  Rng unused;
  Rng& rng = mode.rng ? *mode.rng : unused;
  num::Var h = embed_tokens(p, x, mask);
  for (std::size_t l = 0; l < c.n_layers; ++l) {
    const std::string pre = layer_prefix(l);
    auto norm = [&](num::Var v, const char* which) {
      return num::layer_norm(v, p[pre + which + ".gamma"], p[pre + which + ".beta"]);
    };
    auto self_attention = [&](num::Var v) {
      num::Var q = num::linear(v, p[pre + "attn.q.weight"], p[pre + "attn.q.bias"]);
      num::Var k = num::linear(v, p[pre + "attn.k.weight"], p[pre + "attn.k.bias"]);
      num::Var vv = num::linear(v, p[pre + "attn.v.weight"], p[pre + "attn.v.bias"]);
      num::Var a = num::attention(q, k, vv, c.n_heads);
      return num::linear(a, p[pre + "attn.out.weight"], p[pre + "attn.out.bias"]);
    };
    auto ffn = [&](num::Var v) {
      return num::feed_forward(v, p[pre + "ffn.fc1.weight"], p[pre + "ffn.fc1.bias"],
                               p[pre + "ffn.fc2.weight"], p[pre + "ffn.fc2.bias"], c.activation);
    };
    if (c.norm_placement == NormPlacement::kPost) {
      h = norm(num::add(h, num::dropout(self_attention(h), c.dropout, mode.train, rng)), "norm1");
      h = norm(num::add(h, num::dropout(ffn(h), c.dropout, mode.train, rng)), "norm2");
    } else {
      h = num::add(h, num::dropout(self_attention(norm(h, "norm1")), c.dropout, mode.train, rng));
      h = num::add(h, num::dropout(ffn(norm(h, "norm2")), c.dropout, mode.train, rng));
    }
  }
  return h;
}

num::Var decoder_forward(const Bound& p, num::Var latent) {
  const EncoderConfig& c = p.model().config;
  const num::Shape& s = latent.shape();
  if (s.size() != 3 || s[1] != c.seq_len + 1 || s[2] != c.d_model) {
    throw_contract("decoder input must be [B, " + std::to_string(c.seq_len + 1) + ", " +
                   std::to_string(c.d_model) + "], got " + num::shape_to_string(s));
  }
  num::Var tokens = num::slice(latent, 1, 1, c.seq_len + 1);
  return num::linear(tokens, p["decoder.proj.weight"], p["decoder.proj.bias"]);
}

num::Var cls_embedding(num::Var latent) {
  const num::Shape& s = latent.shape();
  if (s.size() != 3) throw_contract("cls_embedding expects [B, T + 1, D]");
  return num::reshape(num::slice(latent, 1, 0, 1), {s[0], s[2]});
}

num::Var classify_head(const Bound& p, num::Var cls, const num::Tensor& static_full,
                       ForwardMode mode) {
  return head(p, "cls_head", cls, static_full, p.model().config.static_full_dim, mode);
}

num::Var regress_head(const Bound& p, num::Var cls, const num::Tensor& static_scorefree,
                      ForwardMode mode) {
  return head(p, "reg_head", cls, static_scorefree, p.model().config.static_scorefree_dim, mode);
}

Predictions predict(const Model& model, const num::Tensor& vis, const num::Tensor& static_full,
                    const num::Tensor& static_scorefree, std::size_t batch_size) {
  if (batch_size == 0) throw_contract("predict: batch_size must be positive");
  const std::size_t N = vis.dim(0);
  const EncoderConfig& c = model.config;
  Predictions out;
  out.logits = num::Tensor({N, 2});
  out.regression = num::Tensor({N, c.n_scores});
  out.cls = num::Tensor({N, c.d_model});
  out.prob_positive.resize(N);
  for (std::size_t start = 0; start < N; start += batch_size) {
    const std::size_t end = std::min(N, start + batch_size);
    std::vector<std::size_t> rows;
    for (std::size_t i = start; i < end; ++i) rows.push_back(i);
    num::Tape tape;
    Bound p(tape, model, false);
    num::Var latent = encoder_forward(p, num::gather_rows(vis, rows), nullptr, {});
    num::Var cls = cls_embedding(latent);
    num::Var logits = classify_head(p, cls, num::gather_rows(static_full, rows), {});
    num::Var reg = regress_head(p, cls, num::gather_rows(static_scorefree, rows), {});
    const num::Tensor probs = num::softmax_rows(logits.value());
    for (std::size_t i = start; i < end; ++i) {
      const std::size_t r = i - start;
      for (std::size_t k = 0; k < 2; ++k) out.logits[i * 2 + k] = logits.value()[r * 2 + k];
      for (std::size_t k = 0; k < c.n_scores; ++k) {
        out.regression[i * c.n_scores + k] = reg.value()[r * c.n_scores + k];
      }
      for (std::size_t k = 0; k < c.d_model; ++k) out.cls[i * c.d_model + k] = cls.value()[r * c.d_model + k];
      out.prob_positive[i] = probs[r * 2 + 1];
    }
  }
  return out;
}

}  // namespace viskd::model
