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
#include <filesystem>
#include <string>

#include "data/prepared.hpp"
#include "model/config.hpp"
#include "training/trainer.hpp"

namespace viskd::testing {

/// Generated and prepared cohort.
data::PreparedData make_prepared(std::size_t n_patients, double signal_strength, std::uint64_t seed,
                                 double missingness_rate = 0.05);

/// Narrow encoder for fast training tests.
model::EncoderConfig small_model();

/// Short epoch budgets for unit tests.
train::TrainConfig fast_training(std::uint64_t seed);

/// Fresh empty directory under the system temp dir.
std::filesystem::path fresh_dir(const std::string& name);

}  // namespace viskd::testing
