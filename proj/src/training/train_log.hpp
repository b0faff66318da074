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

#include <optional>
#include <string>
#include <vector>

namespace viskd::train {

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  std::optional<double> val_auroc;  // empty for reconstruction training
  /// Train-set means of the unweighted components, in `TrainLog::components` order.
  std::vector<double> components;
  double wall_seconds = 0.0;
};

struct TrainLog {
  std::string stage;
  /// Component names, e.g. {"ce", "mse", "kd"}.
  std::vector<std::string> components;
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;
  bool stopped_early = false;

  /// Throws unless epochs are numbered 1..n and every record has one value
  /// per component.
  void validate() const;

  /// epoch,train_loss,val_loss,val_auroc,<components>. Wall time is left
  /// out so that identical runs produce identical files.
  std::string to_csv() const;
  /// epoch,wall_seconds
  std::string timing_csv() const;

  /// Equality ignoring wall time.
  bool same_trajectory(const TrainLog& other) const;
};

}  // namespace viskd::train
