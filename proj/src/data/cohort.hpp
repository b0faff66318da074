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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "data/vis.hpp"

namespace viskd::data {

inline constexpr std::size_t kScores = 4;
inline constexpr std::array<std::string_view, kScores> kScoreNames{
    "sofa_score_24h", "sapsii", "lods", "oasis"};

using OptDouble = std::optional<double>;
using OptString = std::optional<std::string>;

/// One patient as stored in a cohort file. Nulls are represented as empty
/// optionals.
struct PatientRecord {
  std::string patient_id;
  /// doses[hour][agent], agents ordered as kAgentNames.
  std::array<std::array<OptDouble, kAgents>, kHours> doses{};
  /// Stored hourly total score, if present in the source; validated against
  /// the agent columns on read.
  std::optional<std::array<double, kHours>> total_vis;
  OptString gender;
  OptDouble admission_age;
  OptString marital_status;
  OptString insurance;
  OptString race;
  /// Ordered as kScoreNames.
  std::array<OptDouble, kScores> scores{};
  int mortality = 0;

  bool operator==(const PatientRecord&) const = default;
};

/// Hourly total score treating null doses as zero.
std::array<double, kHours> hourly_total_vis(const PatientRecord& record);

/// Throws a data error naming the offending field.
void validate_record(const PatientRecord& record);

/// One JSON object per line, fields in schema order, nulls explicit.
std::string serialize_cohort(const std::vector<PatientRecord>& records);
/// Errors carry the 1-based line number.
std::vector<PatientRecord> parse_cohort(const std::string& text);

void save_cohort(const std::filesystem::path& path,
                 const std::vector<PatientRecord>& records);
std::vector<PatientRecord> load_cohort(const std::filesystem::path& path);

std::vector<int> labels_of(const std::vector<PatientRecord>& records);

}  // namespace viskd::data
