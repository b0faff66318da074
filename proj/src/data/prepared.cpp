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

#include "data/prepared.hpp"

#include <json.hpp>

#include "common/error.hpp"
#include "common/io.hpp"
#include "numerics/tensor_io.hpp"

namespace viskd::data {
namespace {

using ojson = nlohmann::ordered_json;

ojson parse_artifact(const std::filesystem::path& path) {
  const std::string text = io::read_file(path);
  try {
    return ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw_data(ErrorReason::kSchema, path.string() + ": " + e.what());
  }
}

}  // namespace

std::vector<int> PreparedData::labels_at(std::span<const std::size_t> rows) const {
  std::vector<int> y;
  y.reserve(rows.size());
  for (std::size_t r : rows) y.push_back(labels.at(r));
  return y;
}

PreparedData prepare_cohort(const std::vector<PatientRecord>& records,
                            const std::array<double, 3>& split_fractions,
                            std::uint64_t split_seed) {
  if (records.empty()) throw_data(ErrorReason::kValidation, "empty cohort");
  for (const auto& r : records) validate_record(r);
  PreparedData d;
  d.labels = labels_of(records);
  d.split = stratified_split(d.labels, split_fractions, split_seed);
  d.stats = fit_preprocess_stats(records, d.split.train);
  const auto imputed = impute(records, d.stats);
  d.vis = apply_normalizer(imputed, d.stats);

  const std::size_t n = records.size();
  const std::size_t full_dim = d.stats.manifest.full_dim();
  const std::size_t free_dim = d.stats.manifest.scorefree_dim();
  d.static_full = num::Tensor({n, full_dim});
  d.static_scorefree = num::Tensor({n, free_dim});
  d.score_targets = num::Tensor({n, kScores});
  for (std::size_t i = 0; i < n; ++i) {
    d.patient_ids.push_back(imputed[i].patient_id);
    const StaticVector sv = encode_static(imputed[i], d.stats);
    std::copy(sv.full.begin(), sv.full.end(), d.static_full.data().begin() + static_cast<std::ptrdiff_t>(i * full_dim));
    std::copy(sv.scorefree.begin(), sv.scorefree.end(),
              d.static_scorefree.data().begin() + static_cast<std::ptrdiff_t>(i * free_dim));
    const auto z = normalized_scores(imputed[i], d.stats);
    std::copy(z.begin(), z.end(), d.score_targets.data().begin() + static_cast<std::ptrdiff_t>(i * kScores));
  }
  d.class_weights = compute_class_weights(d.labels_at(d.split.train));
  return d;
}

void save_prepared(const PreparedData& d, const std::filesystem::path& dir) {
  ojson vis;
  vis["format_version"] = 1;
  vis["columns"] = {"dopamine", "dobutamine", "epinephrine", "milrinone", "vasopressin",
                    "norepinephrine", "total_vis"};
  vis["tensor"] = num::tensor_to_json(d.vis);
  io::write_file_atomic(dir / "vis_series.json", vis.dump() + "\n");

  ojson st;
  st["format_version"] = 1;
  st["feature_names"] = d.stats.manifest.feature_names();
  st["patient_ids"] = d.patient_ids;
  st["labels"] = d.labels;
  st["full"] = num::tensor_to_json(d.static_full);
  st["scorefree"] = num::tensor_to_json(d.static_scorefree);
  st["score_targets"] = num::tensor_to_json(d.score_targets);
  io::write_file_atomic(dir / "static_features.json", st.dump() + "\n");

  io::write_file_atomic(dir / "preprocess_stats.json", stats_to_json(d.stats));
  io::write_file_atomic(dir / "splits.json", split_to_json(d.split));

  ojson cw;
  cw["format_version"] = 1;
  cw["class_weights"] = d.class_weights;
  io::write_file_atomic(dir / "class_weights.json", cw.dump(2) + "\n");
}

PreparedData load_prepared(const std::filesystem::path& dir) {
  PreparedData d;
  try {
    const ojson vis = parse_artifact(dir / "vis_series.json");
    d.vis = num::tensor_from_json(vis.at("tensor"));
    const ojson st = parse_artifact(dir / "static_features.json");
    d.patient_ids = st.at("patient_ids").get<std::vector<std::string>>();
    d.labels = st.at("labels").get<std::vector<int>>();
    d.static_full = num::tensor_from_json(st.at("full"));
    d.static_scorefree = num::tensor_from_json(st.at("scorefree"));
    d.score_targets = num::tensor_from_json(st.at("score_targets"));
    d.stats = stats_from_json(io::read_file(dir / "preprocess_stats.json"));
    d.split = split_from_json(io::read_file(dir / "splits.json"));
    const ojson cw = parse_artifact(dir / "class_weights.json");
    d.class_weights = cw.at("class_weights").get<std::array<double, 2>>();
  } catch (const nlohmann::json::exception& e) {
    throw_data(ErrorReason::kSchema, "prepared data in " + dir.string() + ": " + e.what());
  }
  const std::size_t n = d.labels.size();
  if (d.vis.shape() != num::Shape{n, kHours, kVisColumns} || d.static_full.dim(0) != n ||
      d.static_scorefree.dim(0) != n || d.score_targets.dim(0) != n || d.patient_ids.size() != n) {
    throw_data(ErrorReason::kSchema, "prepared data in " + dir.string() + " has inconsistent sizes");
  }
  return d;
}

}  // namespace viskd::data
