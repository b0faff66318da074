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

#include "data/cohort.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <sstream>

#include "common/error.hpp"
#include "common/io.hpp"

namespace viskd::data {
namespace {

using ojson = nlohmann::ordered_json;
using json = nlohmann::json;

ojson opt_to_json(const OptDouble& v) { return v ? ojson(*v) : ojson(nullptr); }
ojson opt_to_json(const OptString& v) { return v ? ojson(*v) : ojson(nullptr); }

const json& require(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw_data(ErrorReason::kSchema, std::string("missing field '") + key + "'");
  return *it;
}

OptDouble read_opt_double(const json& j, const char* key) {
  const json& v = require(j, key);
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) throw_data(ErrorReason::kSchema, std::string("field '") + key + "' must be a number or null");
  return v.get<double>();
}

OptString read_opt_string(const json& j, const char* key) {
  const json& v = require(j, key);
  if (v.is_null()) return std::nullopt;
  if (!v.is_string()) throw_data(ErrorReason::kSchema, std::string("field '") + key + "' must be a string or null");
  return v.get<std::string>();
}

ojson record_to_json(const PatientRecord& r) {
  ojson j;
  j["patient_id"] = r.patient_id;
  ojson doses = ojson::object();
  for (std::size_t a = 0; a < kAgents; ++a) {
    ojson col = ojson::array();
    for (std::size_t h = 0; h < kHours; ++h) col.push_back(opt_to_json(r.doses[h][a]));
    doses[std::string(kAgentNames[a])] = std::move(col);
  }
  j["doses"] = std::move(doses);
  if (r.total_vis) j["total_vis"] = *r.total_vis;
  j["gender"] = opt_to_json(r.gender);
  j["admission_age"] = opt_to_json(r.admission_age);
  j["marital_status"] = opt_to_json(r.marital_status);
  j["insurance"] = opt_to_json(r.insurance);
  j["race"] = opt_to_json(r.race);
  for (std::size_t s = 0; s < kScores; ++s) {
    j[std::string(kScoreNames[s])] = opt_to_json(r.scores[s]);
  }
  j["mortality"] = r.mortality;
  return j;
}

PatientRecord record_from_json(const json& j) {
  if (!j.is_object()) throw_data(ErrorReason::kSchema, "record must be an object");
  static const std::vector<std::string> known = [] {
    std::vector<std::string> k{"patient_id", "doses", "total_vis", "gender", "admission_age",
                               "marital_status", "insurance", "race", "mortality"};
    for (auto s : kScoreNames) k.emplace_back(s);
    return k;
  }();
  for (const auto& item : j.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      throw_data(ErrorReason::kSchema, "unknown field '" + item.key() + "'");
    }
  }
  PatientRecord r;
  const json& id = require(j, "patient_id");
  if (!id.is_string()) throw_data(ErrorReason::kSchema, "patient_id must be a string");
  r.patient_id = id.get<std::string>();
  const json& doses = require(j, "doses");
  if (!doses.is_object()) throw_data(ErrorReason::kSchema, "doses must be an object");
  for (std::size_t a = 0; a < kAgents; ++a) {
    const json& col = require(doses, std::string(kAgentNames[a]).c_str());
    if (!col.is_array() || col.size() != kHours) {
      throw_data(ErrorReason::kSchema, "doses." + std::string(kAgentNames[a]) +
                                           " must hold exactly 48 hourly values");
    }
    for (std::size_t h = 0; h < kHours; ++h) {
      if (col[h].is_null()) continue;
      if (!col[h].is_number()) throw_data(ErrorReason::kSchema, "dose must be a number or null");
      r.doses[h][a] = col[h].get<double>();
    }
  }
  if (doses.size() != kAgents) throw_data(ErrorReason::kSchema, "doses must list exactly the 6 agents");
  if (auto it = j.find("total_vis"); it != j.end() && !it->is_null()) {
    if (!it->is_array() || it->size() != kHours) {
      throw_data(ErrorReason::kSchema, "total_vis must hold 48 values");
    }
    std::array<double, kHours> tv{};
    for (std::size_t h = 0; h < kHours; ++h) tv[h] = (*it)[h].get<double>();
    r.total_vis = tv;
  }
  r.gender = read_opt_string(j, "gender");
  r.admission_age = read_opt_double(j, "admission_age");
  r.marital_status = read_opt_string(j, "marital_status");
  r.insurance = read_opt_string(j, "insurance");
  r.race = read_opt_string(j, "race");
  for (std::size_t s = 0; s < kScores; ++s) {
    r.scores[s] = read_opt_double(j, std::string(kScoreNames[s]).c_str());
  }
  const json& y = require(j, "mortality");
  if (!y.is_number_integer()) throw_data(ErrorReason::kSchema, "mortality must be 0 or 1");
  r.mortality = y.get<int>();
  return r;
}

}  // namespace

std::array<double, kHours> hourly_total_vis(const PatientRecord& record) {
  std::array<double, kHours> out{};
  for (std::size_t h = 0; h < kHours; ++h) {
    std::array<double, kAgents> d{};
    for (std::size_t a = 0; a < kAgents; ++a) d[a] = record.doses[h][a].value_or(0.0);
    out[h] = compute_total_vis(d);
  }
  return out;
}

void validate_record(const PatientRecord& r) {
  const std::string who = "patient " + r.patient_id + ": ";
  if (r.patient_id.empty()) throw_data(ErrorReason::kValidation, "empty patient_id");
  for (std::size_t h = 0; h < kHours; ++h) {
    for (std::size_t a = 0; a < kAgents; ++a) {
      const auto& d = r.doses[h][a];
      if (d && (!std::isfinite(*d) || *d < 0.0)) {
        throw_data(ErrorReason::kValidation, who + std::string(kAgentNames[a]) + " dose at hour " +
                                                 std::to_string(h) + " is negative or non-finite");
      }
    }
  }
  if (r.total_vis) {
    const auto expected = hourly_total_vis(r);
    for (std::size_t h = 0; h < kHours; ++h) {
      const double tol = 1e-9 * std::max(1.0, std::abs(expected[h]));
      if (!(std::abs((*r.total_vis)[h] - expected[h]) <= tol)) {
        throw_data(ErrorReason::kValidation, who + "stored total_vis at hour " + std::to_string(h) +
                                                 " disagrees with the agent doses");
      }
    }
  }
  if (r.admission_age && (!std::isfinite(*r.admission_age) || *r.admission_age < 18.0 ||
                          *r.admission_age > 120.0)) {
    throw_data(ErrorReason::kValidation, who + "admission_age outside [18, 120]");
  }
  for (std::size_t s = 0; s < kScores; ++s) {
    if (r.scores[s] && (!std::isfinite(*r.scores[s]) || *r.scores[s] < 0.0)) {
      throw_data(ErrorReason::kValidation, who + std::string(kScoreNames[s]) + " must be >= 0");
    }
  }
  if (r.mortality != 0 && r.mortality != 1) {
    throw Error(ErrorKind::kData, ErrorReason::kLabel, who + "mortality must be 0 or 1");
  }
}

std::string serialize_cohort(const std::vector<PatientRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += record_to_json(r).dump();
    out += '\n';
  }
  return out;
}

std::vector<PatientRecord> parse_cohort(const std::string& text) {
  std::vector<PatientRecord> records;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      PatientRecord r = record_from_json(json::parse(line));
      validate_record(r);
      records.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw_data(ErrorReason::kSchema, "cohort line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.kind(), e.reason(), "cohort line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

void save_cohort(const std::filesystem::path& path, const std::vector<PatientRecord>& records) {
  io::write_file_atomic(path, serialize_cohort(records));
}

std::vector<PatientRecord> load_cohort(const std::filesystem::path& path) {
  return parse_cohort(io::read_file(path));
}

std::vector<int> labels_of(const std::vector<PatientRecord>& records) {
  std::vector<int> y;
  y.reserve(records.size());
  for (const auto& r : records) y.push_back(r.mortality);
  return y;
}

}  // namespace viskd::data
