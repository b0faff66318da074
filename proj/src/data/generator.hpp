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

#include <cstdint>
#include <vector>

#include "data/cohort.hpp"

namespace viskd::data {

struct GeneratorOptions {
  std::size_t n_patients = 500;
  /// Slope of the mortality logit on the latent severity. 0 makes the label
  /// independent of every feature.
  double signal_strength = 6.0;
  /// Per-cell probability that a nullable value is written as null.
  double missingness_rate = 0.05;
  /// Target marginal mortality rate (a generator choice).
  double positive_rate = 0.22;
  std::uint64_t seed = 42;

  void validate() const;
};

/// Synthetic cohort with the real schema. Each patient draws a latent
/// severity; severity scores, vasoactive dose trajectories, and (scaled by
/// signal_strength) the mortality logit all load on it.
std::vector<PatientRecord> generate_synthetic_cohort(const GeneratorOptions& options);

}  // namespace viskd::data
