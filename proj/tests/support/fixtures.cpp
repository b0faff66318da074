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

#include "support/fixtures.hpp"

#include <unistd.h>

#include "data/generator.hpp"

namespace viskd::testing {

data::PreparedData make_prepared(std::size_t n_patients, double signal_strength, std::uint64_t seed,
                                 double missingness_rate) {
  data::GeneratorOptions g;
  g.n_patients = n_patients;
  g.signal_strength = signal_strength;
  g.missingness_rate = missingness_rate;
  g.seed = seed;
  return data::prepare_cohort(data::generate_synthetic_cohort(g), data::kDefaultSplitFractions, seed);
}

model::EncoderConfig small_model() {
  model::EncoderConfig c;
  c.d_model = 16;
  c.ffn_dim = 32;
  c.n_heads = 2;
  c.n_layers = 1;
  c.head_hidden = 16;
  return c;
}

train::TrainConfig fast_training(std::uint64_t seed) {
  train::TrainConfig t;
  t.max_epochs_pretrain = 3;
  t.max_epochs_student = 3;
  t.seed = seed;
  return t;
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("viskd_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace viskd::testing
