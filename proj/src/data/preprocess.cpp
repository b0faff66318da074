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

#include "data/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "common/error.hpp"
#include "common/log.hpp"

namespace viskd::data {
namespace {

using json = nlohmann::ordered_json;

double median(std::vector<double> v) {
  const std::size_t n = v.size();
  std::sort(v.begin(), v.end());
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct MeanStd {
  double mean = 0.0;
  double std = 1.0;
  bool replaced = false;
};

MeanStd mean_std(const std::vector<double>& v) {
  MeanStd r;
  if (v.empty()) {
    r.replaced = true;
    return r;
  }
  double s = 0.0;
  for (double x : v) s += x;
  r.mean = s / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - r.mean) * (x - r.mean);
  const double sd = std::sqrt(ss / static_cast<double>(v.size()));
  if (sd > 0.0) {
    r.std = sd;
  } else {
    r.std = 1.0;
    r.replaced = true;
  }
  return r;
}

const OptString& categorical_value(const PatientRecord& r, const std::string& field) {
  if (field == "gender") return r.gender;
  if (field == "marital_status") return r.marital_status;
  if (field == "insurance") return r.insurance;
  if (field == "race") return r.race;
  throw_contract("unknown categorical field '" + field + "'");
}

OptString& categorical_value(PatientRecord& r, const std::string& field) {
  return const_cast<OptString&>(categorical_value(std::as_const(r), field));
}

std::string fallback_category(const CategoricalField& f, const PreprocessStats& stats) {
  if (f.unknown) return *f.unknown;
  auto it = stats.categorical_mode.find(f.name);
  return it != stats.categorical_mode.end() ? it->second : f.categories.front();
}

}  // namespace

PreprocessStats fit_preprocess_stats(const std::vector<PatientRecord>& records,
                                     std::span<const std::size_t> train_indices,
                                     const EncodingManifest& manifest) {
  if (train_indices.empty()) throw_data(ErrorReason::kCannotFit, "empty training split");
  PreprocessStats stats;
  stats.manifest = manifest;

  std::vector<double> ages;
  std::array<std::vector<double>, kScores> scores;
  for (std::size_t i : train_indices) {
    const PatientRecord& r = records.at(i);
    if (r.admission_age) ages.push_back(*r.admission_age);
    for (std::size_t s = 0; s < kScores; ++s) {
      if (r.scores[s]) scores[s].push_back(*r.scores[s]);
    }
  }
  if (ages.empty()) throw_data(ErrorReason::kCannotFit, "admission_age is null for every training patient");
  stats.age_median = median(ages);
  for (std::size_t s = 0; s < kScores; ++s) {
    if (scores[s].empty()) {
      throw_data(ErrorReason::kCannotFit,
                 std::string(kScoreNames[s]) + " is null for every training patient");
    }
    stats.score_median[s] = median(scores[s]);
  }
  for (const auto& f : manifest.fields) {
    std::vector<std::size_t> counts(f.categories.size(), 0);
    for (std::size_t i : train_indices) {
      const OptString& v = categorical_value(records[i], f.name);
      if (!v) continue;
      if (auto k = f.index_of(*v); k && (!f.unknown || *v != *f.unknown)) ++counts[*k];
    }
    // max_element returns the first maximum, so ties go to manifest order.
    const auto best = std::max_element(counts.begin(), counts.end()) - counts.begin();
    stats.categorical_mode[f.name] = f.categories[static_cast<std::size_t>(best)];
  }

  std::array<std::vector<double>, kVisColumns> cols;
  std::vector<double> imputed_ages;
  std::array<std::vector<double>, kScores> imputed_scores;
  for (std::size_t i : train_indices) {
    const PatientRecord r = impute(records[i], stats);
    const num::Tensor raw = raw_vis_series(r);
    for (std::size_t h = 0; h < kHours; ++h) {
      for (std::size_t c = 0; c < kVisColumns; ++c) {
        cols[c].push_back(std::log1p(raw[h * kVisColumns + c]));
      }
    }
    imputed_ages.push_back(*r.admission_age);
    for (std::size_t s = 0; s < kScores; ++s) imputed_scores[s].push_back(*r.scores[s]);
  }
  for (std::size_t c = 0; c < kVisColumns; ++c) {
    const MeanStd ms = mean_std(cols[c]);
    stats.vis_mean[c] = ms.mean;
    stats.vis_std[c] = ms.std;
    stats.vis_std_replaced[c] = ms.replaced;
    if (ms.replaced) {
      log::warning("VIS column " + std::to_string(c) + " is constant on train; std set to 1");
    }
  }
  const MeanStd age = mean_std(imputed_ages);
  stats.age_mean = age.mean;
  stats.age_std = age.std;
  stats.age_std_replaced = age.replaced;
  for (std::size_t s = 0; s < kScores; ++s) {
    const MeanStd ms = mean_std(imputed_scores[s]);
    stats.score_mean[s] = ms.mean;
    stats.score_std[s] = ms.std;
    stats.score_std_replaced[s] = ms.replaced;
  }
  return stats;
}

PatientRecord impute(const PatientRecord& record, const PreprocessStats& stats) {
  PatientRecord r = record;
  for (auto& hour : r.doses) {
    for (auto& d : hour) {
      if (!d) d = 0.0;
    }
  }
  if (!r.admission_age) r.admission_age = stats.age_median;
  for (std::size_t s = 0; s < kScores; ++s) {
    if (!r.scores[s]) r.scores[s] = stats.score_median[s];
  }
  for (const auto& f : stats.manifest.fields) {
    OptString& v = categorical_value(r, f.name);
    if (!v) v = fallback_category(f, stats);
  }
  return r;
}

std::vector<PatientRecord> impute(const std::vector<PatientRecord>& records,
                                  const PreprocessStats& stats) {
  std::vector<PatientRecord> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(impute(r, stats));
  return out;
}

num::Tensor raw_vis_series(const PatientRecord& imputed) {
  num::Tensor out({kHours, kVisColumns});
  for (std::size_t h = 0; h < kHours; ++h) {
    std::array<double, kAgents> d{};
    for (std::size_t a = 0; a < kAgents; ++a) {
      if (!imputed.doses[h][a]) throw_contract("raw_vis_series on a record with null doses");
      d[a] = *imputed.doses[h][a];
      out[h * kVisColumns + a] = d[a];
    }
    out[h * kVisColumns + kAgents] = compute_total_vis(d);
  }
  return out;
}

double normalize_vis_value(double x, double mean, double std) {
  if (!(x >= 0.0)) {
    throw_data(ErrorReason::kValidation, "log1p normalization of negative value " + std::to_string(x));
  }
  return (std::log1p(x) - mean) / std;
}

num::Tensor apply_normalizer(const std::vector<PatientRecord>& imputed,
                             const PreprocessStats& stats) {
  num::Tensor out({imputed.size(), kHours, kVisColumns});
  for (std::size_t i = 0; i < imputed.size(); ++i) {
    const num::Tensor raw = raw_vis_series(imputed[i]);
    for (std::size_t h = 0; h < kHours; ++h) {
      for (std::size_t c = 0; c < kVisColumns; ++c) {
        const std::size_t k = h * kVisColumns + c;
        out[i * kHours * kVisColumns + k] =
            normalize_vis_value(raw[k], stats.vis_mean[c], stats.vis_std[c]);
      }
    }
  }
  return out;
}

StaticVector encode_static(const PatientRecord& imputed, const PreprocessStats& stats) {
  const EncodingManifest& m = stats.manifest;
  StaticVector sv;
  sv.full.assign(m.full_dim(), 0.0);
  if (!imputed.admission_age) throw_contract("encode_static on a record with null age");
  sv.full[0] = (*imputed.admission_age - stats.age_mean) / stats.age_std;
  std::size_t offset = 1;
  for (const auto& f : m.fields) {
    const OptString& v = categorical_value(imputed, f.name);
    std::optional<std::size_t> k = v ? f.index_of(*v) : std::nullopt;
    if (!k) {
      const std::string fb = fallback_category(f, stats);
      log::warning("patient " + imputed.patient_id + ": " + f.name + " value '" +
                   v.value_or("<null>") + "' not in manifest; encoded as '" + fb + "'");
      k = f.index_of(fb);
    }
    sv.full[offset + *k] = 1.0;
    offset += f.categories.size();
  }
  const auto z = normalized_scores(imputed, stats);
  for (std::size_t s = 0; s < kScores; ++s) sv.full[offset + s] = z[s];
  sv.scorefree.assign(sv.full.begin(), sv.full.begin() + static_cast<std::ptrdiff_t>(offset));
  return sv;
}

DecodedStatic decode_static(std::span<const double> full, const PreprocessStats& stats) {
  const EncodingManifest& m = stats.manifest;
  if (full.size() != m.full_dim()) throw_contract("decode_static: wrong vector length");
  DecodedStatic d;
  d.admission_age = full[0] * stats.age_std + stats.age_mean;
  std::size_t offset = 1;
  for (const auto& f : m.fields) {
    std::size_t hot = f.categories.size();
    for (std::size_t k = 0; k < f.categories.size(); ++k) {
      if (full[offset + k] == 1.0) {
        if (hot != f.categories.size()) throw_contract("decode_static: group " + f.name + " not one-hot");
        hot = k;
      }
    }
    if (hot == f.categories.size()) throw_contract("decode_static: group " + f.name + " has no active dim");
    d.categories[f.name] = f.categories[hot];
    offset += f.categories.size();
  }
  for (std::size_t s = 0; s < kScores; ++s) {
    d.scores[s] = full[offset + s] * stats.score_std[s] + stats.score_mean[s];
  }
  return d;
}

std::array<double, kScores> normalized_scores(const PatientRecord& imputed,
                                              const PreprocessStats& stats) {
  std::array<double, kScores> z{};
  for (std::size_t s = 0; s < kScores; ++s) {
    if (!imputed.scores[s]) throw_contract("normalized_scores on a record with null scores");
    z[s] = (*imputed.scores[s] - stats.score_mean[s]) / stats.score_std[s];
  }
  return z;
}

std::string stats_to_json(const PreprocessStats& s) {
  json j;
  j["format_version"] = s.format_version;
  j["vis_mean"] = s.vis_mean;
  j["vis_std"] = s.vis_std;
  j["vis_std_replaced"] = s.vis_std_replaced;
  j["age_median"] = s.age_median;
  j["age_mean"] = s.age_mean;
  j["age_std"] = s.age_std;
  j["age_std_replaced"] = s.age_std_replaced;
  j["score_median"] = s.score_median;
  j["score_mean"] = s.score_mean;
  j["score_std"] = s.score_std;
  j["score_std_replaced"] = s.score_std_replaced;
  j["categorical_mode"] = s.categorical_mode;
  json fields = json::array();
  for (const auto& f : s.manifest.fields) {
    json jf;
    jf["name"] = f.name;
    jf["categories"] = f.categories;
    jf["unknown"] = f.unknown ? json(*f.unknown) : json(nullptr);
    fields.push_back(std::move(jf));
  }
  j["manifest"] = std::move(fields);
  return j.dump(2) + "\n";
}

PreprocessStats stats_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    PreprocessStats s;
    s.format_version = j.at("format_version").get<int>();
    if (s.format_version != 1) {
      throw_data(ErrorReason::kSchema, "unsupported preprocess stats format_version " +
                                           std::to_string(s.format_version));
    }
    s.vis_mean = j.at("vis_mean").get<std::array<double, kVisColumns>>();
    s.vis_std = j.at("vis_std").get<std::array<double, kVisColumns>>();
    s.vis_std_replaced = j.at("vis_std_replaced").get<std::array<bool, kVisColumns>>();
    s.age_median = j.at("age_median").get<double>();
    s.age_mean = j.at("age_mean").get<double>();
    s.age_std = j.at("age_std").get<double>();
    s.age_std_replaced = j.at("age_std_replaced").get<bool>();
    s.score_median = j.at("score_median").get<std::array<double, kScores>>();
    s.score_mean = j.at("score_mean").get<std::array<double, kScores>>();
    s.score_std = j.at("score_std").get<std::array<double, kScores>>();
    s.score_std_replaced = j.at("score_std_replaced").get<std::array<bool, kScores>>();
    s.categorical_mode = j.at("categorical_mode").get<std::map<std::string, std::string>>();
    s.manifest.fields.clear();
    for (const auto& jf : j.at("manifest")) {
      CategoricalField f;
      f.name = jf.at("name").get<std::string>();
      f.categories = jf.at("categories").get<std::vector<std::string>>();
      if (!jf.at("unknown").is_null()) f.unknown = jf.at("unknown").get<std::string>();
      s.manifest.fields.push_back(std::move(f));
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw_data(ErrorReason::kSchema, std::string("preprocess stats: ") + e.what());
  }
}

}  // namespace viskd::data
