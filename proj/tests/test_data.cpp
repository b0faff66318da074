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
#include <numbers>
#include <set>

#include "common/error.hpp"
#include "common/log.hpp"
#include "data/generator.hpp"
#include "data/prepared.hpp"
#include "support/fixtures.hpp"

namespace viskd::data {
namespace {

std::vector<PatientRecord> cohort(std::size_t n, std::uint64_t seed, double missing = 0.05, double signal = 4.0) {
  GeneratorOptions g;
  g.n_patients = n;
  g.seed = seed;
  g.missingness_rate = missing;
  g.signal_strength = signal;
  return generate_synthetic_cohort(g);
}

std::vector<std::size_t> iota(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

TEST(Vis, Examples) {
  const std::array<double, kAgents> zero{};
  EXPECT_EQ(compute_total_vis(zero), 0.0);
  const std::array<double, kAgents> dopamine{3, 0, 0, 0, 0, 0};
  EXPECT_EQ(compute_total_vis(dopamine), 3.0);
  // dopamine, dobutamine, epinephrine, milrinone, vasopressin, norepinephrine
  const std::array<double, kAgents> mixed{2.5, 0, 0.05, 0.5, 0.002, 0.1};
  EXPECT_NEAR(compute_total_vis(mixed), 42.5, 1e-9);
}

TEST(Vis, NegativeOrNonFiniteDoseIsValidationError) {
  const std::array<double, kAgents> negative{0, -1, 0, 0, 0, 0};
  try {
    compute_total_vis(negative);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.reason(), ErrorReason::kValidation);
  }
  const std::array<double, kAgents> nan{0, NAN, 0, 0, 0, 0};
  EXPECT_THROW(compute_total_vis(nan), Error);
}

TEST(Generator, DeterministicAndSchemaValid) {
  const auto a = cohort(60, 9), b = cohort(60, 9), c = cohort(60, 10);
  EXPECT_EQ(serialize_cohort(a), serialize_cohort(b));
  EXPECT_NE(serialize_cohort(a), serialize_cohort(c));
  for (const auto& r : a) {
    EXPECT_NO_THROW(validate_record(r));
    ASSERT_TRUE(r.total_vis.has_value());
    const auto totals = hourly_total_vis(r);
    for (std::size_t h = 0; h < kHours; ++h) {
      EXPECT_NEAR((*r.total_vis)[h], totals[h], 1e-9 * std::max(1.0, std::abs(totals[h])));
    }
  }
}

TEST(Generator, ZeroMissingnessHasNoNulls) {
  for (const auto& r : cohort(50, 3, 0.0)) {
    for (const auto& hour : r.doses) {
      for (const auto& d : hour) EXPECT_TRUE(d.has_value());
    }
    EXPECT_TRUE(r.gender && r.admission_age && r.marital_status && r.insurance && r.race);
    for (const auto& s : r.scores) EXPECT_TRUE(s.has_value());
  }
}

TEST(Generator, PositiveRateNearTarget) {
  const auto labels = labels_of(cohort(2000, 5));
  const double rate = static_cast<double>(std::count(labels.begin(), labels.end(), 1)) / 2000.0;
  EXPECT_NEAR(rate, 0.22, 0.04);
}

TEST(Generator, RejectsBadOptions) {
  GeneratorOptions g;
  g.n_patients = 10;
  EXPECT_THROW(generate_synthetic_cohort(g), Error);
  g.n_patients = 100;
  g.missingness_rate = 1.5;
  EXPECT_THROW(generate_synthetic_cohort(g), Error);
}

TEST(Cohort, FileRoundTripAndLineNumberedErrors) {
  const auto records = cohort(30, 4);
  const std::string text = serialize_cohort(records);
  EXPECT_EQ(parse_cohort(text), records);
  EXPECT_EQ(serialize_cohort(parse_cohort(text)), text);

  std::string broken = text;
  const auto second_line = broken.find('\n') + 1;
  broken.insert(second_line, "{\"patient_id\": 5}\n");
  try {
    parse_cohort(broken);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kData);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(Cohort, ValidationRejectsOutOfRangeValues) {
  PatientRecord r = cohort(20, 1, 0.0).front();
  r.admission_age = 15.0;
  EXPECT_THROW(validate_record(r), Error);
  r = cohort(20, 1, 0.0).front();
  r.doses[3][2] = -0.1;
  EXPECT_THROW(validate_record(r), Error);
  r = cohort(20, 1, 0.0).front();
  r.mortality = 2;
  EXPECT_THROW(validate_record(r), Error);
  r = cohort(20, 1, 0.0).front();
  (*r.total_vis)[0] += 1.0;
  EXPECT_THROW(validate_record(r), Error);
}

TEST(Preprocess, ImputationRules) {
  auto records = cohort(40, 8, 0.0);
  records[0].doses[0][0].reset();
  records[0].scores[0].reset();
  records[0].marital_status.reset();
  records[0].admission_age.reset();
  const auto train = iota(40);
  const PreprocessStats stats = fit_preprocess_stats(records, train);
  const PatientRecord imputed = impute(records[0], stats);
  EXPECT_EQ(*imputed.doses[0][0], 0.0);
  EXPECT_EQ(*imputed.scores[0], stats.score_median[0]);
  EXPECT_EQ(*imputed.admission_age, stats.age_median);
  EXPECT_EQ(*imputed.marital_status, "UNKNOWN");
  EXPECT_EQ(impute(imputed, stats), imputed);
}

TEST(Preprocess, MedianFromTrainOnly) {
  auto records = cohort(20, 8, 0.0);
  for (std::size_t i = 0; i < records.size(); ++i) records[i].scores[0] = i < 10 ? 6.0 : 100.0;
  records[19].scores[0].reset();
  std::vector<std::size_t> train{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  const PreprocessStats stats = fit_preprocess_stats(records, train);
  EXPECT_EQ(stats.score_median[0], 6.0);
  EXPECT_EQ(*impute(records[19], stats).scores[0], 6.0);
  // Stats fit on the other half differ: nothing leaks across splits.
  std::vector<std::size_t> other{10, 11, 12, 13, 14, 15, 16, 17, 18};
  EXPECT_NE(fit_preprocess_stats(records, other).score_median[0], stats.score_median[0]);
}

TEST(Preprocess, AllNullScoreColumnCannotFit) {
  auto records = cohort(20, 8, 0.0);
  for (auto& r : records) r.scores[2].reset();
  try {
    fit_preprocess_stats(records, iota(20));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.reason(), ErrorReason::kCannotFit);
  }
}

TEST(Preprocess, NormalizerExamples) {
  EXPECT_EQ(normalize_vis_value(0.0, 0.0, 1.0), 0.0);
  EXPECT_NEAR(normalize_vis_value(std::numbers::e - 1.0, 0.0, 1.0), 1.0, 1e-15);
  EXPECT_THROW(normalize_vis_value(-0.5, 0.0, 1.0), Error);
}

TEST(Preprocess, ConstantColumnGetsUnitStd) {
  auto records = cohort(30, 2, 0.0);
  for (auto& r : records) {
    for (auto& hour : r.doses) hour[3] = 0.0;  // milrinone never used
    r.total_vis = hourly_total_vis(r);
  }
  std::vector<std::string> warnings;
  auto previous = log::set_sink([&](log::Level, const std::string& m) { warnings.push_back(m); });
  const PreprocessStats stats = fit_preprocess_stats(records, iota(30));
  log::set_sink(previous);
  EXPECT_EQ(stats.vis_std[3], 1.0);
  EXPECT_TRUE(stats.vis_std_replaced[3]);
  EXPECT_FALSE(warnings.empty());
  const num::Tensor x = apply_normalizer(impute(records, stats), stats);
  for (std::size_t i = 3; i < x.numel(); i += kVisColumns) EXPECT_EQ(x[i], 0.0);
}

TEST(Encoding, LayoutAndGroups) {
  const EncodingManifest m = EncodingManifest::standard();
  EXPECT_EQ(m.full_dim(), 51u);
  EXPECT_EQ(m.scorefree_dim(), 47u);
  const auto names = m.feature_names();
  ASSERT_EQ(names.size(), 51u);
  EXPECT_EQ(names[0], "admission_age");
  EXPECT_EQ(names[1], "gender_F");
  EXPECT_EQ(names[2], "gender_M");
  EXPECT_EQ(names[47], "sofa_score_24h");
  EXPECT_EQ(names[50], "oasis");
  EXPECT_NE(std::find(names.begin(), names.end(), "marital_status_SINGLE"), names.end());
  EXPECT_NE(std::find(names.begin(), names.end(), "insurance_Medicaid"), names.end());
  std::size_t covered = 0;
  for (const auto& g : m.groups()) covered += g.width;
  EXPECT_EQ(covered, 51u);
  EXPECT_EQ(m.groups().size(), 9u);
}

TEST(Encoding, OneHotGroupsSumToOneAndRoundTrip) {
  const auto records = cohort(100, 12, 0.1);
  const PreprocessStats stats = fit_preprocess_stats(records, iota(100));
  for (const auto& raw : records) {
    const PatientRecord r = impute(raw, stats);
    const StaticVector v = encode_static(r, stats);
    ASSERT_EQ(v.full.size(), 51u);
    ASSERT_EQ(v.scorefree.size(), 47u);
    EXPECT_TRUE(std::equal(v.scorefree.begin(), v.scorefree.end(), v.full.begin()));
    for (const auto& g : stats.manifest.groups()) {
      if (!g.one_hot) continue;
      double s = 0.0;
      for (std::size_t d = g.offset; d < g.offset + g.width; ++d) s += v.full[d];
      EXPECT_EQ(s, 1.0) << g.name;
    }
    const DecodedStatic dec = decode_static(v.full, stats);
    EXPECT_EQ(dec.categories.at("gender"), *r.gender);
    EXPECT_EQ(dec.categories.at("marital_status"), *r.marital_status);
    EXPECT_EQ(dec.categories.at("insurance"), *r.insurance);
    EXPECT_EQ(dec.categories.at("race"), *r.race);
    EXPECT_NEAR(dec.admission_age, *r.admission_age, 1e-9);
  }
}

TEST(Encoding, GenderFOrdering) {
  auto records = cohort(30, 12, 0.0);
  records[0].gender = "F";
  const PreprocessStats stats = fit_preprocess_stats(records, iota(30));
  const StaticVector v = encode_static(impute(records[0], stats), stats);
  EXPECT_EQ(v.full[1], 1.0);
  EXPECT_EQ(v.full[2], 0.0);
}

TEST(Encoding, UnseenCategoryFallsBackWithWarning) {
  auto records = cohort(30, 12, 0.0);
  const PreprocessStats stats = fit_preprocess_stats(records, iota(30));
  PatientRecord r = impute(records[0], stats);
  r.insurance = "Spaceflight";
  std::vector<std::string> warnings;
  auto previous = log::set_sink([&](log::Level, const std::string& m) { warnings.push_back(m); });
  const StaticVector v = encode_static(r, stats);
  log::set_sink(previous);
  EXPECT_EQ(warnings.size(), 1u);
  EXPECT_EQ(decode_static(v.full, stats).categories.at("insurance"), "Unknown");
}

TEST(Split, HandComputedAllocation) {
  std::vector<int> labels(1000, 0);
  std::fill(labels.begin(), labels.begin() + 220, 1);
  const SplitIndices s = stratified_split(labels, kDefaultSplitFractions, 42);
  EXPECT_EQ(s.train.size(), 720u);
  EXPECT_EQ(s.validation.size(), 80u);
  EXPECT_EQ(s.test.size(), 200u);
  auto positives = [&](const std::vector<std::size_t>& idx) {
    return std::count_if(idx.begin(), idx.end(), [&](std::size_t i) { return labels[i] == 1; });
  };
  EXPECT_TRUE(positives(s.train) == 158 || positives(s.train) == 159);
  EXPECT_TRUE(positives(s.validation) == 17 || positives(s.validation) == 18);
  EXPECT_EQ(positives(s.test), 44);
  std::set<std::size_t> all(s.train.begin(), s.train.end());
  all.insert(s.validation.begin(), s.validation.end());
  all.insert(s.test.begin(), s.test.end());
  EXPECT_EQ(all.size(), 1000u);
  EXPECT_EQ(stratified_split(labels, kDefaultSplitFractions, 42), s);
  EXPECT_NE(stratified_split(labels, kDefaultSplitFractions, 43).fingerprint(), s.fingerprint());
}

TEST(Split, StratificationWithinOnePatient) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto labels = labels_of(cohort(137 + seed, seed));
    const double global = static_cast<double>(std::count(labels.begin(), labels.end(), 1)) / labels.size();
    const SplitIndices s = stratified_split(labels, kDefaultSplitFractions, seed);
    for (const auto* idx : {&s.train, &s.validation, &s.test}) {
      const double pos = static_cast<double>(
          std::count_if(idx->begin(), idx->end(), [&](std::size_t i) { return labels[i] == 1; }));
      EXPECT_LE(std::abs(pos / idx->size() - global), 1.0 / idx->size() + 1e-12);
    }
    const double n = static_cast<double>(labels.size());
    EXPECT_LE(std::abs(s.train.size() - 0.72 * n), 1.0);
    EXPECT_LE(std::abs(s.validation.size() - 0.08 * n), 1.0);
    EXPECT_LE(std::abs(s.test.size() - 0.20 * n), 1.0);
  }
}

TEST(Split, SingleClassIsPlainSplitAndTinyClassFails) {
  const std::vector<int> same(50, 0);
  const SplitIndices s = stratified_split(same, kDefaultSplitFractions, 1);
  EXPECT_EQ(s.train.size() + s.validation.size() + s.test.size(), 50u);
  std::vector<int> tiny(50, 0);
  tiny[0] = 1;
  tiny[1] = 1;
  try {
    stratified_split(tiny, kDefaultSplitFractions, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.reason(), ErrorReason::kStratification);
  }
}

TEST(ClassWeights, Examples) {
  std::vector<int> balanced(1000, 0);
  std::fill(balanced.begin(), balanced.begin() + 500, 1);
  EXPECT_EQ(compute_class_weights(balanced), (std::array<double, 2>{1.0, 1.0}));
  std::vector<int> skewed(1000, 0);
  std::fill(skewed.begin(), skewed.begin() + 200, 1);
  const auto w = compute_class_weights(skewed);
  EXPECT_NEAR(w[0], 0.625, 1e-9);
  EXPECT_NEAR(w[1], 2.5, 1e-9);
  EXPECT_NEAR(w[0] * 800 + w[1] * 200, 1000.0, 1e-9);
  const std::vector<int> one_class(10, 1);
  try {
    compute_class_weights(one_class);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.reason(), ErrorReason::kDegenerateClass);
  }
}

TEST(Prepared, ShapesAndPersistence) {
  const PreparedData d = testing::make_prepared(120, 4.0, 3);
  EXPECT_EQ(d.vis.shape(), (num::Shape{120, 48, 7}));
  EXPECT_EQ(d.static_full.shape(), (num::Shape{120, 51}));
  EXPECT_EQ(d.static_scorefree.shape(), (num::Shape{120, 47}));
  EXPECT_EQ(d.score_targets.shape(), (num::Shape{120, 4}));
  EXPECT_TRUE(d.vis.all_finite());
  const auto dir = testing::fresh_dir("prepared");
  save_prepared(d, dir);
  const PreparedData back = load_prepared(dir);
  EXPECT_EQ(back.vis, d.vis);
  EXPECT_EQ(back.static_full, d.static_full);
  EXPECT_EQ(back.static_scorefree, d.static_scorefree);
  EXPECT_EQ(back.score_targets, d.score_targets);
  EXPECT_EQ(back.split, d.split);
  EXPECT_EQ(back.stats, d.stats);
  EXPECT_EQ(back.class_weights, d.class_weights);
  EXPECT_EQ(back.labels, d.labels);
  EXPECT_EQ(back.patient_ids, d.patient_ids);
  std::filesystem::remove_all(dir);
}

TEST(Prepared, MissingDirectoryNamesTheFile) {
  try {
    load_prepared("/nonexistent/viskd/prepared");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kMissingArtifact);
    EXPECT_NE(std::string(e.what()).find("/nonexistent/viskd/prepared/"), std::string::npos);
  }
}

TEST(Prepared, RepeatedPreparationIsIdentical) {
  const PreparedData a = testing::make_prepared(80, 4.0, 6);
  const PreparedData b = testing::make_prepared(80, 4.0, 6);
  EXPECT_EQ(a.vis, b.vis);
  EXPECT_EQ(a.split, b.split);
  EXPECT_EQ(a.stats, b.stats);
}

}  // namespace
}  // namespace viskd::data
