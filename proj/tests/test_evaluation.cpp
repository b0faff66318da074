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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "common/error.hpp"
#include "evaluation/bootstrap.hpp"
#include "evaluation/report.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "training/trainer.hpp"

namespace viskd::eval {
namespace {

TEST(Confusion, Fixtures) {
  const auto fixtures = testing::metric_fixtures();
  EXPECT_GE(fixtures.size(), 5u);
  for (const auto& f : fixtures) EXPECT_EQ(testing::compare_fixture(f, 1e-12), "") << f.name;
}

TEST(Confusion, TableFormulaValues) {
  const BinaryMetrics m = binary_metrics({70, 80, 20, 30});
  EXPECT_NEAR(*m.sensitivity, 0.7, 1e-12);
  EXPECT_NEAR(*m.specificity, 0.8, 1e-12);
  EXPECT_NEAR(*m.ppv, 0.7778, 1e-4);
  EXPECT_NEAR(*m.npv, 0.7273, 1e-4);
  EXPECT_NEAR(*m.plr, 3.5, 1e-12);
  EXPECT_NEAR(*m.nlr, 0.375, 1e-12);
  EXPECT_NEAR(*m.accuracy, 0.75, 1e-12);
}

TEST(Confusion, PerfectAndUndefined) {
  const BinaryMetrics perfect = binary_metrics({10, 10, 0, 0});
  EXPECT_EQ(*perfect.sensitivity, 1.0);
  EXPECT_EQ(*perfect.specificity, 1.0);
  EXPECT_EQ(*perfect.ppv, 1.0);
  EXPECT_EQ(*perfect.npv, 1.0);
  EXPECT_EQ(*perfect.accuracy, 1.0);
  EXPECT_EQ(*perfect.nlr, 0.0);
  EXPECT_FALSE(perfect.plr.has_value());
  const BinaryMetrics none = binary_metrics({0, 5, 0, 5});
  EXPECT_FALSE(none.ppv.has_value());
}

TEST(Confusion, InputErrors) {
  const std::vector<double> s{0.1, 0.2};
  const std::vector<int> bad{0, 2}, short_labels{1};
  EXPECT_THROW(confusion_at_threshold({}, {}, 0.5), Error);
  EXPECT_THROW(confusion_at_threshold(s, short_labels, 0.5), Error);
  try {
    confusion_at_threshold(s, bad, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.reason(), ErrorReason::kLabel);
  }
}

TEST(Auroc, Examples) {
  const std::vector<double> sep{0.1, 0.2, 0.8, 0.9};
  const std::vector<int> y{0, 0, 1, 1};
  EXPECT_EQ(auroc(sep, y), 1.0);
  const std::vector<double> same(4, 0.3);
  EXPECT_EQ(auroc(same, y), 0.5);
  const std::vector<int> one_class(4, 1);
  try {
    auroc(sep, one_class);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.reason(), ErrorReason::kUndefinedMetric);
  }
  EXPECT_FALSE(try_auroc(sep, one_class).has_value());
}

TEST(Auroc, MatchesPairwiseOracle) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto inst = testing::random_auroc_instance(seed);
    EXPECT_NEAR(auroc(inst.scores, inst.labels), testing::brute_force_auroc(inst.scores, inst.labels),
                1e-9)
        << seed;
  }
}

TEST(Roc, EndpointsMonotoneAndAreaMatchesAuroc) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto inst = testing::random_auroc_instance(seed + 1000);
    const auto curve = roc_curve(inst.scores, inst.labels);
    ASSERT_GE(curve.size(), 2u);
    EXPECT_EQ(curve.front().fpr, 0.0);
    EXPECT_EQ(curve.front().tpr, 0.0);
    EXPECT_EQ(curve.back().fpr, 1.0);
    EXPECT_EQ(curve.back().tpr, 1.0);
    for (std::size_t i = 1; i < curve.size(); ++i) {
      EXPECT_GE(curve[i].fpr, curve[i - 1].fpr);
      EXPECT_GE(curve[i].tpr, curve[i - 1].tpr);
      EXPECT_LT(curve[i].threshold, curve[i - 1].threshold);
    }
    EXPECT_NEAR(trapezoid_area(curve), auroc(inst.scores, inst.labels), 1e-12);
  }
}

TEST(Roc, PerfectClassifierPassesThroughCorner) {
  const std::vector<double> s{0.1, 0.3, 0.7, 0.9};
  const std::vector<int> y{0, 0, 1, 1};
  const auto curve = roc_curve(s, y);
  EXPECT_TRUE(std::any_of(curve.begin(), curve.end(),
                          [](const RocPoint& p) { return p.fpr == 0.0 && p.tpr == 1.0; }));
  EXPECT_EQ(roc_to_csv(curve).substr(0, 8), "fpr,tpr\n");
  const std::vector<int> one(4, 0);
  EXPECT_THROW(roc_curve(s, one), Error);
}

TEST(R2, Cases) {
  const num::Tensor target = num::Tensor::matrix(4, 2, {1, 5, 2, 5, 3, 5, 4, 5});
  const R2Result exact = r2_score(target, target);
  EXPECT_EQ(*exact.per_dim[0], 1.0);
  EXPECT_FALSE(exact.per_dim[1].has_value());
  EXPECT_EQ(*exact.mean, 1.0);

  const num::Tensor t2 = num::Tensor::matrix(4, 2, {1, 2, 2, 4, 3, 6, 4, 9});
  const num::Tensor mean = num::Tensor::matrix(4, 2, {2.5, 5.25, 2.5, 5.25, 2.5, 5.25, 2.5, 5.25});
  const R2Result at_mean = r2_score(mean, t2);
  EXPECT_NEAR(*at_mean.per_dim[0], 0.0, 1e-15);
  EXPECT_NEAR(*at_mean.mean, 0.0, 1e-15);
  const num::Tensor bad = num::Tensor::matrix(4, 2, {10, -10, 10, -10, 10, -10, 10, -10});
  const R2Result worse = r2_score(bad, t2);
  EXPECT_LT(*worse.mean, -5.9291);
  // 1 - SS_res / SS_tot by hand for the first dim.
  const num::Tensor off = num::Tensor::matrix(4, 2, {1, 2, 2, 4, 3, 6, 5, 9});
  EXPECT_NEAR(*r2_score(off, t2).per_dim[0], 1.0 - 1.0 / 5.0, 1e-15);
  EXPECT_NEAR(*r2_score(off, t2).mean, 0.5 * (0.8 + 1.0), 1e-15);
}

TEST(Bootstrap, ConstantMetricHasZeroWidth) {
  const std::vector<double> s(50, 0.4);
  std::vector<int> y(50, 0);
  std::fill(y.begin(), y.begin() + 10, 1);
  BootstrapOptions o;
  o.seed = 1;
  const auto ci = bootstrap_ci(
      [](std::span<const double> a, std::span<const int> b) { return try_auroc(a, b); }, s, y, o, 0.5);
  EXPECT_EQ(ci.low, 0.5);
  EXPECT_EQ(ci.high, 0.5);
  EXPECT_EQ(ci.n_valid, 1000u);
}

TEST(Bootstrap, OrderingAndDeterminism) {
  auto metric = [](std::span<const double> a, std::span<const int> b) { return try_auroc(a, b); };
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto inst = testing::random_auroc_instance(seed + 2000, 120);
    BootstrapOptions o;
    o.seed = seed;
    o.n_resamples = 200;
    const double point = auroc(inst.scores, inst.labels);
    const auto ci = bootstrap_ci(metric, inst.scores, inst.labels, o, point);
    EXPECT_LE(ci.low, point);
    EXPECT_LE(point, ci.high);
    EXPECT_EQ(ci, bootstrap_ci(metric, inst.scores, inst.labels, o, point));
  }
}

TEST(Bootstrap, WidthShrinksWithSampleSize) {
  auto metric = [](std::span<const double> a, std::span<const int> b) { return try_auroc(a, b); };
  auto width = [&](std::size_t n, std::uint64_t seed) {
    Rng rng = make_rng(seed, "width");
    std::vector<double> s(n);
    std::vector<int> y(n);
    std::normal_distribution<double> normal;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = i % 4 == 0 ? 1 : 0;
      s[i] = normal(rng) + 1.0 * y[i];
    }
    BootstrapOptions o;
    o.seed = seed;
    o.n_resamples = 200;
    const auto ci = bootstrap_ci(metric, s, y, o);
    return ci.high - ci.low;
  };
  std::vector<double> small, large;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    small.push_back(width(200, seed));
    large.push_back(width(2000, seed));
  }
  std::sort(small.begin(), small.end());
  std::sort(large.begin(), large.end());
  EXPECT_LT(large[10], small[10]);
}

TEST(Bootstrap, PercentileAndOptions) {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  EXPECT_EQ(percentile_sorted(v, 0.0), 1.0);
  EXPECT_EQ(percentile_sorted(v, 1.0), 4.0);
  EXPECT_NEAR(percentile_sorted(v, 0.5), 2.5, 1e-15);
  EXPECT_NEAR(percentile_sorted(v, 0.025), 1.075, 1e-12);
  BootstrapOptions o;
  o.n_resamples = 10;
  EXPECT_THROW(o.validate(), Error);
}

TEST(Bootstrap, AlwaysUndefinedFails) {
  const std::vector<int> y{0, 0, 0, 1};
  BootstrapOptions o;
  const ResampleMetric never = [](std::span<const std::size_t>) -> std::optional<double> {
    return std::nullopt;
  };
  try {
    bootstrap_ci(never, y, o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.reason(), ErrorReason::kUndefinedMetric);
  }
}

double youden(std::span<const double> s, std::span<const int> y, double t) {
  const BinaryMetrics m = binary_metrics(confusion_at_threshold(s, y, t));
  return *m.sensitivity + *m.specificity - 1.0;
}

TEST(Threshold, SeparatedScoresGiveGapMidpoint) {
  const std::vector<double> s{0.1, 0.2, 0.3, 0.7, 0.8};
  const std::vector<int> y{0, 0, 0, 1, 1};
  EXPECT_NEAR(choose_threshold(s, y), 0.5, 1e-15);
  EXPECT_EQ(youden(s, y, choose_threshold(s, y)), 1.0);
}

TEST(Threshold, ArgmaxOverAllCandidates) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto inst = testing::random_auroc_instance(seed + 3000, 200);
    const double t = choose_threshold(inst.scores, inst.labels);
    const double best = youden(inst.scores, inst.labels, t);
    for (double c : inst.scores) EXPECT_LE(youden(inst.scores, inst.labels, c), best + 1e-12);
    EXPECT_LE(youden(inst.scores, inst.labels, 2.0), best + 1e-12);
    EXPECT_EQ(choose_threshold(inst.scores, inst.labels), t);
  }
}

TEST(Report, EvaluateTrainedModelAndRoundTrip) {
  const data::PreparedData d = testing::make_prepared(160, 4.0, 31);
  train::TrainConfig t = testing::fast_training(31);
  t.kd_enabled = false;
  t.warm_start = false;
  t.max_epochs_student = 2;
  const auto student = train::train_student(d, nullptr, nullptr, t, testing::small_model());
  EvaluationOptions o;
  o.n_resamples = 200;
  const EvaluationResult r = evaluate_model(student.model, d, o, 31, "baseline");
  EXPECT_EQ(r.report.n, d.split.test.size());
  EXPECT_EQ(r.report.split_fingerprint, d.split.fingerprint());
  EXPECT_EQ(r.test_scores.size(), d.split.test.size());
  for (const auto& col : kReportColumns) {
    const MetricEstimate& m = r.report.metric(col);
    if (!m.point) continue;
    ASSERT_TRUE(m.low && m.high) << col;
    EXPECT_LE(*m.low, *m.point) << col;
    EXPECT_LE(*m.point, *m.high) << col;
  }
  for (const char* col : {"Sensitivity", "Specificity", "PPV", "NPV", "ACC", "AUROC"}) {
    const auto& p = r.report.metric(col).point;
    if (p) {
      EXPECT_GE(*p, 0.0);
      EXPECT_LE(*p, 1.0);
    }
  }
  const std::vector<int> test_labels = d.labels_at(d.split.test);
  EXPECT_NEAR(*r.report.metric("AUROC").point, auroc(r.test_scores, test_labels), 1e-15);
  EXPECT_EQ(report_from_json(nlohmann::json::parse(report_to_json(r.report).dump())), r.report);
  EXPECT_EQ(evaluate_model(student.model, d, o, 31, "baseline").report, r.report);
  const std::string header = report_csv_header();
  EXPECT_EQ(header.substr(0, 30), "name,R2,R2_ci_low,R2_ci_high,A");
  EXPECT_EQ(report_csv_row(r.report).substr(0, 9), "baseline,");
  const EvaluationResult flagged = evaluate_model(student.model, d, o, 31, "no_mt", false);
  EXPECT_FALSE(flagged.report.notes.empty());
}

}  // namespace
}  // namespace viskd::eval
