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

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace viskd::data {

/// One one-hot encoded categorical field. `unknown` names the category that
/// absorbs nulls and unseen values; fields without one fall back to the
/// training mode.
struct CategoricalField {
  std::string name;
  std::vector<std::string> categories;
  std::optional<std::string> unknown;

  std::optional<std::size_t> index_of(const std::string& value) const;
};

/// A contiguous block of the static vector treated as one attribution
/// player.
struct FeatureGroup {
  std::string name;
  std::size_t offset = 0;
  std::size_t width = 1;
  bool one_hot = false;
};

/// Fixed layout of the static vector:
///   admission_age (1) | gender (2) | marital_status (5) | insurance (5) |
///   race (34) | sofa_score_24h, sapsii, lods, oasis (4)
/// The first 47 dims form the score-free vector used by the regression head.
struct EncodingManifest {
  std::vector<CategoricalField> fields;  // gender, marital_status, insurance, race

  static EncodingManifest standard();

  const CategoricalField& field(const std::string& name) const;
  std::size_t full_dim() const;
  std::size_t scorefree_dim() const;
  std::size_t score_offset() const { return scorefree_dim(); }
  std::vector<std::string> feature_names() const;
  std::vector<FeatureGroup> groups() const;

  bool operator==(const EncodingManifest&) const = default;
};

bool operator==(const CategoricalField& a, const CategoricalField& b);

}  // namespace viskd::data
