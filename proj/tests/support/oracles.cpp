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

#include "support/oracles.hpp"

#include <cmath>
#include <sstream>

#include "common/rng.hpp"

namespace viskd::testing {

namespace {

eval::BinaryMetrics expected(std::optional<double> ppv, std::optional<double> npv,
                             std::optional<double> sens, std::optional<double> spec,
                             std::optional<double> plr, std::optional<double> nlr,
                             std::optional<double> acc) {
  eval::BinaryMetrics m;
  m.ppv = ppv;
  m.npv = npv;
  m.sensitivity = sens;
  m.specificity = spec;
  m.plr = plr;
  m.nlr = nlr;
  m.accuracy = acc;
  return m;
}

// n_pos positives scored `hi` for the first tp of them, `lo` otherwise, and
// likewise for negatives.
void fill(MetricFixture& f, std::size_t tp, std::size_t fn, std::size_t tn, std::size_t fp) {
  for (std::size_t i = 0; i < tp; ++i) f.scores.push_back(0.9), f.labels.push_back(1);
  for (std::size_t i = 0; i < fn; ++i) f.scores.push_back(0.1), f.labels.push_back(1);
  for (std::size_t i = 0; i < tn; ++i) f.scores.push_back(0.2), f.labels.push_back(0);
  for (std::size_t i = 0; i < fp; ++i) f.scores.push_back(0.8), f.labels.push_back(0);
  f.counts = {tp, tn, fp, fn};
}

void describe(std::ostringstream& out, const char* field, const std::optional<double>& got,
              const std::optional<double>& want, double tol) {
  const bool ok = got.has_value() == want.has_value() && (!got || std::abs(*got - *want) <= tol);
  if (ok) return;
  out << field << ": got " << (got ? std::to_string(*got) : "undefined") << ", want "
      << (want ? std::to_string(*want) : "undefined") << "; ";
}

}  // namespace

std::vector<MetricFixture> metric_fixtures() {
  std::vector<MetricFixture> out;
  {
    MetricFixture f{"hand count"};
    f.scores = {0.9, 0.2, 0.6, 0.4};
    f.labels = {1, 0, 1, 0};
    f.counts = {2, 2, 0, 0};
    f.metrics = expected(1.0, 1.0, 1.0, 1.0, std::nullopt, 0.0, 1.0);
    out.push_back(f);
  }
  {
    MetricFixture f{"table formulas"};
    fill(f, 70, 30, 80, 20);
    f.metrics = expected(70.0 / 90.0, 80.0 / 110.0, 0.7, 0.8, 3.5, 0.375, 0.75);
    out.push_back(f);
  }
  {
    MetricFixture f{"threshold zero"};
    f.scores = {0.9, 0.2, 0.6, 0.4};
    f.labels = {1, 0, 1, 0};
    f.threshold = 0.0;
    f.counts = {2, 0, 2, 0};
    f.metrics = expected(0.5, std::nullopt, 1.0, 0.0, 1.0, std::nullopt, 0.5);
    out.push_back(f);
  }
  {
    MetricFixture f{"threshold above one"};
    f.scores = {0.9, 0.2, 0.6, 0.4};
    f.labels = {1, 0, 1, 0};
    f.threshold = 1.5;
    f.counts = {0, 2, 0, 2};
    f.metrics = expected(std::nullopt, 0.5, 0.0, 1.0, std::nullopt, 1.0, 0.5);
    out.push_back(f);
  }
  {
    MetricFixture f{"mixed errors"};
    fill(f, 3, 1, 5, 2);
    f.metrics = expected(0.6, 5.0 / 6.0, 0.75, 5.0 / 7.0, 0.75 / (2.0 / 7.0), 0.25 / (5.0 / 7.0),
                         8.0 / 11.0);
    out.push_back(f);
  }
  {
    MetricFixture f{"score equals threshold"};
    f.scores = {0.5, 0.5, 0.49};
    f.labels = {1, 0, 0};
    f.counts = {1, 1, 1, 0};
    f.metrics = expected(0.5, 1.0, 1.0, 0.5, 2.0, 0.0, 2.0 / 3.0);
    out.push_back(f);
  }
  return out;
}

std::string compare_fixture(const MetricFixture& f, double tol) {
  std::ostringstream out;
  const eval::ConfusionCounts c = eval::confusion_at_threshold(f.scores, f.labels, f.threshold);
  if (!(c == f.counts)) {
    out << "counts: got TP" << c.tp << " TN" << c.tn << " FP" << c.fp << " FN" << c.fn << "; ";
  }
  const eval::BinaryMetrics m = eval::binary_metrics(c);
  describe(out, "PPV", m.ppv, f.metrics.ppv, tol);
  describe(out, "NPV", m.npv, f.metrics.npv, tol);
  describe(out, "Sensitivity", m.sensitivity, f.metrics.sensitivity, tol);
  describe(out, "Specificity", m.specificity, f.metrics.specificity, tol);
  describe(out, "PLR", m.plr, f.metrics.plr, tol);
  describe(out, "NLR", m.nlr, f.metrics.nlr, tol);
  describe(out, "ACC", m.accuracy, f.metrics.accuracy, tol);
  return out.str();
}

double brute_force_auroc(std::span<const double> scores, std::span<const int> labels) {
  double wins = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) {
        wins += 1.0;
      } else if (scores[i] == scores[j]) {
        wins += 0.5;
      }
    }
  }
  return wins / pairs;
}

AurocInstance random_auroc_instance(std::uint64_t seed, std::size_t max_n) {
  Rng rng = make_rng(seed, "auroc-instance");
  const std::size_t n = 2 + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(max_n - 1));
  const double grid = 2.0 + std::floor(uniform01(rng) * 50.0);
  AurocInstance inst;
  for (std::size_t i = 0; i < n; ++i) {
    const int y = uniform01(rng) < 0.3 ? 1 : 0;
    const double s = std::floor((uniform01(rng) + 0.3 * y) * grid) / grid;
    inst.labels.push_back(y);
    inst.scores.push_back(s);
  }
  inst.labels[0] = 1;
  inst.labels[1] = 0;
  return inst;
}

LinearOracleResult linear_shapley_oracle(std::size_t n_samples, std::uint64_t seed) {
  const std::vector<data::FeatureGroup> groups{
      {"a", 0, 1, false}, {"b", 1, 1, false}, {"c", 2, 3, true},
      {"d", 5, 1, false}, {"e", 6, 1, false}, {"f", 7, 2, true}};
  const std::size_t dims = 9;
  Rng rng = make_rng(seed, "linear-oracle");
  std::vector<double> w(dims);
  for (double& v : w) v = 4.0 * uniform01(rng) - 2.0;
  const double c = 0.7;
  const attr::BatchFunction f = [&](const num::Tensor& in) {
    std::vector<double> out(in.dim(0), c);
    for (std::size_t r = 0; r < in.dim(0); ++r) {
      for (std::size_t d = 0; d < dims; ++d) out[r] += w[d] * in[r * dims + d];
    }
    return out;
  };
  const std::vector<double> x{1.5, -0.3, 0, 1, 0, 2.2, 0.4, 1, 0};
  const std::vector<double> b{0.2, 0.9, 1, 0, 0, -1.0, 0.4, 0, 1};

  const attr::GroupShapley s = attr::shapley_groups(f, x, b, groups, n_samples, seed);
  LinearOracleResult out;
  out.groups = groups.size();
  double total = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    double want = 0.0;
    for (std::size_t d = groups[g].offset; d < groups[g].offset + groups[g].width; ++d) {
      want += w[d] * (x[d] - b[d]);
    }
    const double err = std::abs(s.values[g] - want) / std::max(std::abs(want), 1e-12);
    // A null player (x == b on every dim) must get exactly zero.
    out.max_rel_error = std::max(out.max_rel_error, want == 0.0 ? std::abs(s.values[g]) : err);
    total += s.values[g];
  }
  out.max_local_gap = std::abs(total - (s.f_input - s.f_background));
  return out;
}

}  // namespace viskd::testing
