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

#include "data/encoding.hpp"

#include <algorithm>

#include "common/error.hpp"
#include "data/cohort.hpp"

namespace viskd::data {

std::optional<std::size_t> CategoricalField::index_of(const std::string& value) const {
  auto it = std::find(categories.begin(), categories.end(), value);
  if (it == categories.end()) return std::nullopt;
  return static_cast<std::size_t>(it - categories.begin());
}

bool operator==(const CategoricalField& a, const CategoricalField& b) {
  return a.name == b.name && a.categories == b.categories && a.unknown == b.unknown;
}

EncodingManifest EncodingManifest::standard() {
  EncodingManifest m;
  m.fields.push_back({"gender", {"F", "M"}, std::nullopt});
  m.fields.push_back(
      {"marital_status", {"MARRIED", "SINGLE", "DIVORCED", "WIDOWED", "UNKNOWN"}, "UNKNOWN"});
  m.fields.push_back({"insurance", {"Medicare", "Medicaid", "Private", "Other", "Unknown"}, "Unknown"});
  m.fields.push_back({"race",
                      {"AMERICAN INDIAN/ALASKA NATIVE",
                       "AMERICAN INDIAN/ALASKA NATIVE FEDERALLY RECOGNIZED TRIBE",
                       "ASIAN",
                       "ASIAN - ASIAN INDIAN",
                       "ASIAN - CHINESE",
                       "ASIAN - KOREAN",
                       "ASIAN - SOUTH EAST ASIAN",
                       "BLACK/AFRICAN",
                       "BLACK/AFRICAN AMERICAN",
                       "BLACK/CAPE VERDEAN",
                       "BLACK/CARIBBEAN ISLAND",
                       "HISPANIC OR LATINO",
                       "HISPANIC/LATINO - CENTRAL AMERICAN",
                       "HISPANIC/LATINO - COLUMBIAN",
                       "HISPANIC/LATINO - CUBAN",
                       "HISPANIC/LATINO - DOMINICAN",
                       "HISPANIC/LATINO - GUATEMALAN",
                       "HISPANIC/LATINO - HONDURAN",
                       "HISPANIC/LATINO - MEXICAN",
                       "HISPANIC/LATINO - PUERTO RICAN",
                       "HISPANIC/LATINO - SALVADORAN",
                       "MULTIPLE RACE/ETHNICITY",
                       "NATIVE HAWAIIAN OR OTHER PACIFIC ISLANDER",
                       "OTHER",
                       "PATIENT DECLINED TO ANSWER",
                       "PORTUGUESE",
                       "SOUTH AMERICAN",
                       "UNABLE TO OBTAIN",
                       "UNKNOWN",
                       "WHITE",
                       "WHITE - BRAZILIAN",
                       "WHITE - EASTERN EUROPEAN",
                       "WHITE - OTHER EUROPEAN",
                       "WHITE - RUSSIAN"},
                      "UNKNOWN"});
  return m;
}

const CategoricalField& EncodingManifest::field(const std::string& name) const {
  for (const auto& f : fields) {
    if (f.name == name) return f;
  }
  throw_contract("manifest has no field '" + name + "'");
}

std::size_t EncodingManifest::scorefree_dim() const {
  std::size_t d = 1;  // admission_age
  for (const auto& f : fields) d += f.categories.size();
  return d;
}

std::size_t EncodingManifest::full_dim() const { return scorefree_dim() + kScores; }

std::vector<std::string> EncodingManifest::feature_names() const {
  std::vector<std::string> names{"admission_age"};
  for (const auto& f : fields) {
    for (const auto& c : f.categories) names.push_back(f.name + "_" + c);
  }
  for (auto s : kScoreNames) names.emplace_back(s);
  return names;
}

std::vector<FeatureGroup> EncodingManifest::groups() const {
  std::vector<FeatureGroup> g;
  g.push_back({"admission_age", 0, 1, false});
  std::size_t offset = 1;
  for (const auto& f : fields) {
    g.push_back({f.name, offset, f.categories.size(), true});
    offset += f.categories.size();
  }
  for (auto s : kScoreNames) g.push_back({std::string(s), offset++, 1, false});
  return g;
}

}  // namespace viskd::data
