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
#include <span>
#include <vector>

#include "model/config.hpp"

namespace viskd::model {

/// Per-sample boolean masks over the seq_len x n_features input grid,
/// stored batch-major.
struct MaskPlan {
  std::size_t batch = 0;
  std::size_t seq_len = 0;
  std::size_t n_features = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint8_t> cells;

  std::size_t cells_per_sample() const { return seq_len * n_features; }
  std::size_t count(std::size_t sample) const;
};

/// ceil(mask_ratio * seq_len * n_features) for cell masking; for timestep
/// masking, ceil(mask_ratio * seq_len) whole rows.
std::size_t masked_cells_per_sample(const EncoderConfig& config);

/// Sample `b` of the plan uses the substream (seed, first_sample + b), so a
/// sample's mask does not depend on its batch position.
MaskPlan make_mask(std::size_t batch_size, const EncoderConfig& config, std::uint64_t seed,
                   std::uint64_t first_sample = 0);

/// Mask for an explicit list of sample ids (e.g. dataset rows).
MaskPlan make_mask_for(std::span<const std::size_t> sample_ids, const EncoderConfig& config,
                       std::uint64_t seed);

}  // namespace viskd::model
