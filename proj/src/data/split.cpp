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

#include "data/split.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numeric>

#include "common/error.hpp"
#include "common/io.hpp"
#include "common/rng.hpp"

namespace viskd::data {
namespace {

// Integer apportionment of `total` proportional to `weights` (largest
// remainder, ties to the earlier slot).
std::array<std::size_t, 3> apportion(std::size_t total, const std::array<double, 3>& weights) {
  const double wsum = weights[0] + weights[1] + weights[2];
  std::array<std::size_t, 3> out{};
  std::array<double, 3> rem{};
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    const double exact = static_cast<double>(total) * weights[k] / wsum;
    out[k] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    rem[k] = exact - static_cast<double>(out[k]);
    assigned += out[k];
  }
  while (assigned < total) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < 3; ++k) {
      if (rem[k] > rem[best]) best = k;
    }
    ++out[best];
    rem[best] = -1.0;
    ++assigned;
  }
  return out;
}

}  // namespace

std::string SplitIndices::fingerprint() const {
  std::string bytes;
  for (const auto* part : {&train, &validation, &test}) {
    for (std::size_t i : *part) bytes += std::to_string(i) + ",";
    bytes += "|";
  }
  return io::fingerprint(bytes);
}

SplitIndices stratified_split(std::span<const int> labels, const std::array<double, 3>& fractions,
                              std::uint64_t seed) {
  double fsum = 0.0;
  std::size_t active = 0;
  for (double f : fractions) {
    if (!(f >= 0.0)) throw_config("split fractions must be nonnegative");
    fsum += f;
    if (f > 0.0) ++active;
  }
  if (std::abs(fsum - 1.0) > 1e-9) throw_config("split fractions must sum to 1");

  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) {
      throw Error(ErrorKind::kData, ErrorReason::kLabel, "label outside {0, 1}");
    }
    by_class[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  for (int c = 0; c < 2; ++c) {
    const auto n = by_class[c].size();
    if (n > 0 && n < active) {
      throw_data(ErrorReason::kStratification,
                 "class " + std::to_string(c) + " has " + std::to_string(n) +
                     " members, fewer than the " + std::to_string(active) + " splits");
    }
  }

  const std::size_t n = labels.size();
  const std::size_t n_pos = by_class[1].size();
  const auto sizes = apportion(n, fractions);
  std::array<double, 3> pos_weights{};
  for (std::size_t k = 0; k < 3; ++k) pos_weights[k] = static_cast<double>(sizes[k]);
  const auto pos = n == 0 ? std::array<std::size_t, 3>{} : apportion(n_pos, pos_weights);

  Rng rng = make_rng(seed, "split");
  for (auto& members : by_class) std::shuffle(members.begin(), members.end(), rng);

  SplitIndices split;
  split.seed = seed;
  std::array<std::vector<std::size_t>*, 3> parts{&split.train, &split.validation, &split.test};
  std::size_t pos_cursor = 0, neg_cursor = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    const std::size_t neg_count = sizes[k] - pos[k];
    if (pos[k] > sizes[k] || neg_cursor + neg_count > by_class[0].size()) {
      throw_data(ErrorReason::kStratification, "cannot stratify with these class counts");
    }
    for (std::size_t j = 0; j < pos[k]; ++j) parts[k]->push_back(by_class[1][pos_cursor++]);
    for (std::size_t j = 0; j < neg_count; ++j) parts[k]->push_back(by_class[0][neg_cursor++]);
    std::sort(parts[k]->begin(), parts[k]->end());
  }
  return split;
}

std::array<double, 2> compute_class_weights(std::span<const int> train_labels) {
  std::array<std::size_t, 2> counts{};
  for (int y : train_labels) {
    if (y != 0 && y != 1) throw Error(ErrorKind::kData, ErrorReason::kLabel, "label outside {0, 1}");
    ++counts[static_cast<std::size_t>(y)];
  }
  if (counts[0] == 0 || counts[1] == 0) {
    throw_data(ErrorReason::kDegenerateClass, "both classes must be present in the training split");
  }
  const double n = static_cast<double>(train_labels.size());
  return {n / (2.0 * static_cast<double>(counts[0])), n / (2.0 * static_cast<double>(counts[1]))};
}

std::string split_to_json(const SplitIndices& s) {
  nlohmann::ordered_json j;
  j["format_version"] = s.format_version;
  j["seed"] = s.seed;
  j["fingerprint"] = s.fingerprint();
  j["train"] = s.train;
  j["validation"] = s.validation;
  j["test"] = s.test;
  return j.dump() + "\n";
}

SplitIndices split_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    SplitIndices s;
    s.format_version = j.at("format_version").get<int>();
    if (s.format_version != 1) throw_data(ErrorReason::kSchema, "unsupported split format_version");
    s.seed = j.at("seed").get<std::uint64_t>();
    s.train = j.at("train").get<std::vector<std::size_t>>();
    s.validation = j.at("validation").get<std::vector<std::size_t>>();
    s.test = j.at("test").get<std::vector<std::size_t>>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw_data(ErrorReason::kSchema, std::string("split indices: ") + e.what());
  }
}

}  // namespace viskd::data
