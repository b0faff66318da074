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

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "data/cohort.hpp"
#include "data/encoding.hpp"
#include "numerics/tensor.hpp"

namespace viskd::data {

/// Everything fit on the training split and reused verbatim on validation
/// and test.
struct PreprocessStats {
  int format_version = 1;
  /// log1p-space column statistics of the 7 VIS columns.
  std::array<double, kVisColumns> vis_mean{};
  std::array<double, kVisColumns> vis_std{};
  std::array<bool, kVisColumns> vis_std_replaced{};
  double age_median = 0.0;
  double age_mean = 0.0;
  double age_std = 1.0;
  bool age_std_replaced = false;
  std::array<double, kScores> score_median{};
  std::array<double, kScores> score_mean{};
  std::array<double, kScores> score_std{};
  std::array<bool, kScores> score_std_replaced{};
  /// Most frequent in-manifest training category per field; imputes nulls
  /// for fields whose manifest has no unknown category.
  std::map<std::string, std::string> categorical_mode;
  EncodingManifest manifest = EncodingManifest::standard();

  bool operator==(const PreprocessStats&) const = default;
};

/// Fits medians and modes on raw training records, imputes them, then fits
/// the log1p/z-score statistics. Only `train_indices` are read.
PreprocessStats fit_preprocess_stats(const std::vector<PatientRecord>& records,
                                     std::span<const std::size_t> train_indices,
                                     const EncodingManifest& manifest = EncodingManifest::standard());

/// Null doses -> 0, null age/scores -> training median, null categoricals
/// -> the field's unknown category (or training mode). Idempotent.
PatientRecord impute(const PatientRecord& record, const PreprocessStats& stats);
std::vector<PatientRecord> impute(const std::vector<PatientRecord>& records,
                                  const PreprocessStats& stats);

/// Raw 48x7 matrix: the six agents plus the total score column.
num::Tensor raw_vis_series(const PatientRecord& imputed);

/// (log1p(x) - mean) / std. Throws a domain (validation) error for x < 0.
double normalize_vis_value(double x, double mean, double std);

/// [N, 48, 7] normalized series for imputed records.
num::Tensor apply_normalizer(const std::vector<PatientRecord>& imputed,
                             const PreprocessStats& stats);

struct StaticVector {
  std::vector<double> full;       // 51 dims
  std::vector<double> scorefree;  // first 47 dims of `full`
};

/// Encodes an imputed record. Unseen categories map to the field's unknown
/// category (or mode) with a warning.
StaticVector encode_static(const PatientRecord& imputed, const PreprocessStats& stats);

struct DecodedStatic {
  std::map<std::string, std::string> categories;
  double admission_age = 0.0;
  std::array<double, kScores> scores{};
};

/// Inverse of encode_static for in-manifest values.
DecodedStatic decode_static(std::span<const double> full, const PreprocessStats& stats);

/// Severity scores z-scored with the training statistics.
std::array<double, kScores> normalized_scores(const PatientRecord& imputed,
                                              const PreprocessStats& stats);

std::string stats_to_json(const PreprocessStats& stats);
PreprocessStats stats_from_json(const std::string& text);

}  // namespace viskd::data
