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

#include "model/mask.hpp"

#include <cmath>
#include <numeric>
#include <span>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace viskd::model {
namespace {

std::size_t ceil_count(double exact) {
  // Guards against ratios like 1/336 landing a hair above an integer.
  return static_cast<std::size_t>(std::ceil(exact - 1e-9));
}

void fill_sample(std::uint8_t* cells, const EncoderConfig& config, Rng& rng) {
  const std::size_t T = config.seq_len, F = config.n_features;
  const bool by_row = config.mask_granularity == MaskGranularity::kTimestep;
  const std::size_t universe = by_row ? T : T * F;
  const std::size_t k = by_row ? ceil_count(config.mask_ratio * static_cast<double>(T))
                               : ceil_count(config.mask_ratio * static_cast<double>(T * F));
  std::vector<std::size_t> order(universe);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Partial Fisher-Yates: the first k entries are a uniform k-subset.
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(universe - i));
    std::swap(order[i], order[j]);
    if (by_row) {
      for (std::size_t f = 0; f < F; ++f) cells[order[i] * F + f] = 1;
    } else {
      cells[order[i]] = 1;
    }
  }
}

}  // namespace

std::size_t MaskPlan::count(std::size_t sample) const {
  std::size_t c = 0;
  for (std::size_t i = 0; i < cells_per_sample(); ++i) c += cells[sample * cells_per_sample() + i];
  return c;
}

std::size_t masked_cells_per_sample(const EncoderConfig& config) {
  config.validate();
  const double T = static_cast<double>(config.seq_len);
  if (config.mask_granularity == MaskGranularity::kTimestep) {
    return ceil_count(config.mask_ratio * T) * config.n_features;
  }
  return ceil_count(config.mask_ratio * T * static_cast<double>(config.n_features));
}

MaskPlan make_mask_for(std::span<const std::size_t> sample_ids, const EncoderConfig& config,
                       std::uint64_t seed) {
  if (masked_cells_per_sample(config) == 0) throw_config("mask_ratio selects no cells");
  MaskPlan plan;
  plan.batch = sample_ids.size();
  plan.seq_len = config.seq_len;
  plan.n_features = config.n_features;
  plan.seed = seed;
  plan.cells.assign(plan.batch * plan.cells_per_sample(), 0);
  for (std::size_t b = 0; b < plan.batch; ++b) {
    Rng rng(derive_seed(seed, "mask", sample_ids[b]));
    fill_sample(plan.cells.data() + b * plan.cells_per_sample(), config, rng);
  }
  return plan;
}

MaskPlan make_mask(std::size_t batch_size, const EncoderConfig& config, std::uint64_t seed,
                   std::uint64_t first_sample) {
  std::vector<std::size_t> ids(batch_size);
  std::iota(ids.begin(), ids.end(), static_cast<std::size_t>(first_sample));
  return make_mask_for(ids, config, seed);
}

}  // namespace viskd::model
