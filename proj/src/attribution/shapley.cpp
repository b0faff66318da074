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

#include "attribution/shapley.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "common/error.hpp"
#include "common/format.hpp"
#include "common/rng.hpp"
#include "numerics/ops.hpp"

namespace viskd::attr {
namespace {

void check_groups(const std::vector<data::FeatureGroup>& groups, std::size_t dims) {
  std::vector<int> covered(dims, 0);
  for (const auto& g : groups) {
    if (g.width == 0 || g.offset + g.width > dims) throw_contract("shapley: group out of range");
    for (std::size_t d = g.offset; d < g.offset + g.width; ++d) ++covered[d];
  }
  if (std::any_of(covered.begin(), covered.end(), [](int c) { return c != 1; })) {
    throw_contract("shapley: groups must cover every dim exactly once");
  }
}

/// Dim of a one-hot group that is set in `x` (the first maximum).
std::size_t active_dim(const data::FeatureGroup& g, std::span<const double> x) {
  std::size_t best = g.offset;
  for (std::size_t d = g.offset; d < g.offset + g.width; ++d) {
    if (x[d] > x[best]) best = d;
  }
  return best;
}

}  // namespace

GroupShapley shapley_groups(const BatchFunction& f, std::span<const double> x,
                            std::span<const double> background,
                            const std::vector<data::FeatureGroup>& groups,
                            std::size_t n_permutations, std::uint64_t seed) {
  const std::size_t dims = x.size();
  if (background.size() != dims) throw_contract("shapley: background and input differ in size");
  if (n_permutations == 0) throw_contract("shapley: need at least one permutation");
  check_groups(groups, dims);
  const std::size_t G = groups.size();

  // Row 0: background. Row 1: input. Then the G - 1 intermediate
  // coalitions of each sampled order.
  const std::size_t inner = G - 1;
  num::Tensor inputs({2 + n_permutations * inner, dims});
  std::copy(background.begin(), background.end(), inputs.data().begin());
  std::copy(x.begin(), x.end(), inputs.data().begin() + static_cast<std::ptrdiff_t>(dims));
  std::vector<std::vector<std::size_t>> orders(n_permutations);
  Rng rng(seed);
  std::vector<double> z(dims);
  for (std::size_t p = 0; p < n_permutations; ++p) {
    auto& order = orders[p];
    order.resize(G);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::copy(background.begin(), background.end(), z.begin());
    for (std::size_t k = 0; k < inner; ++k) {
      const auto& g = groups[order[k]];
      for (std::size_t d = g.offset; d < g.offset + g.width; ++d) z[d] = x[d];
      std::copy(z.begin(), z.end(),
                inputs.data().begin() + static_cast<std::ptrdiff_t>((2 + p * inner + k) * dims));
    }
  }
  const std::vector<double> out = f(inputs);
  if (out.size() != inputs.dim(0)) throw_contract("shapley: model returned the wrong number of outputs");

  GroupShapley r;
  r.values.assign(G, 0.0);
  r.f_background = out[0];
  r.f_input = out[1];
  for (std::size_t p = 0; p < n_permutations; ++p) {
    double prev = r.f_background;
    for (std::size_t k = 0; k < G; ++k) {
      const double cur = k + 1 < G ? out[2 + p * inner + k] : r.f_input;
      r.values[orders[p][k]] += cur - prev;
      prev = cur;
    }
  }
  for (double& v : r.values) v /= static_cast<double>(n_permutations);
  return r;
}

void ShapleyOptions::validate() const {
  if (n_samples < 1) throw_config("attribution: n_samples must be positive");
  if (batch_size < 1) throw_config("attribution: batch_size must be positive");
}

double AttributionResult::max_local_accuracy_gap() const {
  double worst = 0.0;
  const std::size_t dims = feature_names.size();
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    double total = 0.0;
    for (std::size_t d = 0; d < dims; ++d) total += values[i * dims + d];
    worst = std::max(worst, std::abs(total - (predictions[i] - base_values[i])));
  }
  return worst;
}

std::vector<double> static_background(const data::PreparedData& data,
                                      const std::vector<data::FeatureGroup>& groups) {
  const auto& train = data.split.train;
  if (train.empty()) throw_data(ErrorReason::kValidation, "attribution: empty train split");
  const std::size_t dims = data.static_full.dim(1);
  check_groups(groups, dims);
  std::vector<double> b(dims, 0.0);
  for (const auto& g : groups) {
    if (g.one_hot) {
      std::vector<std::size_t> counts(g.width, 0);
      for (std::size_t r : train) {
        const std::span<const double> row(data.static_full.data().data() + r * dims, dims);
        ++counts[active_dim(g, row) - g.offset];
      }
      const auto mode = std::max_element(counts.begin(), counts.end()) - counts.begin();
      b[g.offset + static_cast<std::size_t>(mode)] = 1.0;
    } else {
      for (std::size_t d = g.offset; d < g.offset + g.width; ++d) {
        std::vector<double> v;
        for (std::size_t r : train) v.push_back(data.static_full[r * dims + d]);
        std::sort(v.begin(), v.end());
        const std::size_t n = v.size();
        b[d] = n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
      }
    }
  }
  return b;
}

AttributionResult shapley_static(const model::Model& m, const data::PreparedData& data,
                                 const std::vector<std::size_t>& rows, const ShapleyOptions& options) {
  options.validate();
  if (m.stage != model::Stage::kStudent) {
    throw_contract(std::string("attribution needs a student checkpoint, got stage ") +
                   model::to_string(m.stage));
  }
  model::validate_shapes(m);
  const data::EncodingManifest& manifest = data.stats.manifest;
  const std::vector<data::FeatureGroup> groups = manifest.groups();
  const std::size_t dims = data.static_full.dim(1);
  if (dims != m.config.static_full_dim) throw_contract("attribution: static dims do not match the model");

  AttributionResult r;
  r.feature_names = manifest.feature_names();
  for (const auto& g : groups) r.group_names.push_back(g.name);
  r.rows = rows;
  for (std::size_t row : rows) r.patient_ids.push_back(data.patient_ids.at(row));
  r.features = num::gather_rows(data.static_full, rows);
  r.background = static_background(data, groups);
  r.background_description =
      "train-split median for continuous features; train-split mode for one-hot groups";
  r.n_samples = options.n_samples;
  r.seed = options.seed;
  const std::size_t N = rows.size();
  r.values = num::Tensor({N, dims});
  r.group_values = num::Tensor({N, groups.size()});
  r.mean_abs.assign(dims, 0.0);

  const model::Predictions pred =
      model::predict(m, num::gather_rows(data.vis, rows), r.features,
                     num::gather_rows(data.static_scorefree, rows), options.batch_size);
  const std::size_t D = m.config.d_model;
  for (std::size_t i = 0; i < N; ++i) {
    const std::span<const double> cls(pred.cls.data().data() + i * D, D);
    const BatchFunction f = [&](const num::Tensor& inputs) {
      const std::size_t M = inputs.dim(0);
      num::Tensor cls_rep({M, D});
      for (std::size_t k = 0; k < M; ++k) {
        std::copy(cls.begin(), cls.end(), cls_rep.data().begin() + static_cast<std::ptrdiff_t>(k * D));
      }
      num::Tape tape;
      model::Bound p(tape, m, false);
      num::Var logits = model::classify_head(p, tape.constant(std::move(cls_rep)), inputs, {});
      const num::Tensor probs = num::softmax_rows(logits.value());
      std::vector<double> out(M);
      for (std::size_t k = 0; k < M; ++k) out[k] = probs[k * 2 + 1];
      return out;
    };
    const std::span<const double> x(r.features.data().data() + i * dims, dims);
    const GroupShapley s =
        shapley_groups(f, x, r.background, groups, options.n_samples, derive_seed(options.seed, "shap", rows[i]));
    r.predictions.push_back(s.f_input);
    r.base_values.push_back(s.f_background);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      r.group_values[i * groups.size() + g] = s.values[g];
      const std::size_t d = groups[g].one_hot ? active_dim(groups[g], x) : groups[g].offset;
      r.values[i * dims + d] = s.values[g];
    }
  }
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t d = 0; d < dims; ++d) r.mean_abs[d] += std::abs(r.values[i * dims + d]);
  }
  if (N > 0) {
    for (double& v : r.mean_abs) v /= static_cast<double>(N);
  }
  return r;
}

std::vector<RankedFeature> rank_features(const AttributionResult& result) {
  std::vector<RankedFeature> out;
  for (std::size_t d = 0; d < result.feature_names.size(); ++d) {
    out.push_back({result.feature_names[d], result.mean_abs.at(d)});
  }
  std::sort(out.begin(), out.end(), [](const RankedFeature& a, const RankedFeature& b) {
    if (a.mean_abs != b.mean_abs) return a.mean_abs > b.mean_abs;
    return a.name < b.name;
  });
  return out;
}

nlohmann::ordered_json attribution_to_json(const AttributionResult& r) {
  nlohmann::ordered_json j;
  j["format_version"] = 1;
  j["explained_output"] = "positive-class probability";
  j["n_samples"] = r.n_samples;
  j["seed"] = r.seed;
  j["background_description"] = r.background_description;
  j["feature_names"] = r.feature_names;
  j["background"] = r.background;
  nlohmann::ordered_json ranking = nlohmann::ordered_json::array();
  for (const auto& f : rank_features(r)) ranking.push_back({{"feature", f.name}, {"mean_abs_shap", f.mean_abs}});
  j["ranking"] = std::move(ranking);
  j["max_local_accuracy_gap"] = r.max_local_accuracy_gap();
  const std::size_t dims = r.feature_names.size();
  nlohmann::ordered_json patients = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < r.patient_ids.size(); ++i) {
    const auto begin = r.values.storage().begin() + static_cast<std::ptrdiff_t>(i * dims);
    const auto gbegin = r.group_values.storage().begin() + static_cast<std::ptrdiff_t>(i * r.group_names.size());
    nlohmann::ordered_json groups = nlohmann::ordered_json::object();
    for (std::size_t g = 0; g < r.group_names.size(); ++g) groups[r.group_names[g]] = *(gbegin + static_cast<std::ptrdiff_t>(g));
    patients.push_back({{"patient_id", r.patient_ids[i]},
                        {"prediction", r.predictions[i]},
                        {"base_value", r.base_values[i]},
                        {"group_values", std::move(groups)},
                        {"values", std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(dims))}});
  }
  j["patients"] = std::move(patients);
  return j;
}

std::string attribution_summary_csv(const AttributionResult& r) {
  std::string out = "feature,mean_abs_shap\n";
  for (const auto& f : rank_features(r)) out += f.name + "," + fmt::number(f.mean_abs) + "\n";
  return out;
}

std::string attribution_long_csv(const AttributionResult& r) {
  std::string out = "patient_id,feature,feature_value,shap_value\n";
  const std::size_t dims = r.feature_names.size();
  for (std::size_t i = 0; i < r.patient_ids.size(); ++i) {
    for (std::size_t d = 0; d < dims; ++d) {
      out += r.patient_ids[i] + "," + r.feature_names[d] + "," + fmt::number(r.features[i * dims + d]) + "," +
             fmt::number(r.values[i * dims + d]) + "\n";
    }
  }
  return out;
}

}  // namespace viskd::attr
