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

#include "training/train_log.hpp"

#include "common/error.hpp"
#include "common/format.hpp"

namespace viskd::train {

void TrainLog::validate() const {
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    if (epochs[i].epoch != i + 1) throw_contract("train log epochs must be numbered 1..n");
    if (epochs[i].components.size() != components.size()) {
      throw_contract("train log record has the wrong number of components");
    }
  }
}

std::string TrainLog::to_csv() const {
  validate();
  std::string out = "epoch,train_loss,val_loss,val_auroc";
  for (const auto& c : components) out += "," + c;
  out += "\n";
  for (const EpochRecord& e : epochs) {
    out += std::to_string(e.epoch) + "," + fmt::number(e.train_loss) + "," + fmt::number(e.val_loss) +
           "," + (e.val_auroc ? fmt::number(*e.val_auroc) : std::string());
    for (double v : e.components) out += "," + fmt::number(v);
    out += "\n";
  }
  return out;
}

std::string TrainLog::timing_csv() const {
  std::string out = "epoch,wall_seconds\n";
  for (const EpochRecord& e : epochs) {
    out += std::to_string(e.epoch) + "," + fmt::number(e.wall_seconds) + "\n";
  }
  return out;
}

bool TrainLog::same_trajectory(const TrainLog& o) const {
  if (stage != o.stage || components != o.components || best_epoch != o.best_epoch ||
      stopped_early != o.stopped_early || epochs.size() != o.epochs.size()) {
    return false;
  }
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    const EpochRecord& a = epochs[i];
    const EpochRecord& b = o.epochs[i];
    if (a.epoch != b.epoch || a.train_loss != b.train_loss || a.val_loss != b.val_loss ||
        a.val_auroc != b.val_auroc || a.components != b.components) {
      return false;
    }
  }
  return true;
}

}  // namespace viskd::train
