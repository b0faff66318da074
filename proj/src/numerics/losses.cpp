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

#include "numerics/losses.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "common/error.hpp"

namespace viskd::num {

Var weighted_cross_entropy(Var logits, std::span<const int> labels,
                           const std::array<double, 2>& class_weights) {
  const Shape& s = logits.shape();
  if (s.size() != 2 || s[1] != 2) {
    throw_contract("weighted_cross_entropy: logits must be [B, 2], got " +
                   shape_to_string(s));
  }
  const std::size_t B = s[0];
  if (labels.size() != B) throw_contract("weighted_cross_entropy: label count mismatch");
  if (B == 0) throw_contract("weighted_cross_entropy: empty batch");
  if (class_weights[0] <= 0.0 || class_weights[1] <= 0.0) {
    throw_contract("weighted_cross_entropy: class weights must be positive");
  }
  const Tensor& z = logits.value();
  if (!z.all_finite()) throw_numeric_input("weighted_cross_entropy: non-finite logits");
  auto probs = std::make_shared<std::vector<double>>(B * 2);
  std::vector<int> y(labels.begin(), labels.end());
  double total = 0.0;
  for (std::size_t i = 0; i < B; ++i) {
    if (y[i] != 0 && y[i] != 1) {
      throw Error(ErrorKind::kData, ErrorReason::kLabel,
                  "label " + std::to_string(y[i]) + " outside {0, 1}");
    }
    const double a = z[2 * i], b = z[2 * i + 1];
    const double mx = std::max(a, b);
    const double lse = mx + std::log(std::exp(a - mx) + std::exp(b - mx));
    (*probs)[2 * i] = std::exp(a - lse);
    (*probs)[2 * i + 1] = std::exp(b - lse);
    total += class_weights[static_cast<std::size_t>(y[i])] * (lse - z[2 * i + y[i]]);
  }
  const double inv_b = 1.0 / static_cast<double>(B);
  return logits.tape()->record(
      Tensor::scalar(total * inv_b), {logits},
      [logits, probs, y, class_weights, inv_b](Tape& t, const Tensor& g) {
        double* gz = t.grad_sink(logits);
        if (!gz) return;
        for (std::size_t i = 0; i < y.size(); ++i) {
          const double w = class_weights[static_cast<std::size_t>(y[i])] * inv_b * g[0];
          for (int c = 0; c < 2; ++c) {
            const double target = c == y[i] ? 1.0 : 0.0;
            gz[2 * i + c] += w * ((*probs)[2 * i + c] - target);
          }
        }
      });
}

double weighted_cross_entropy(const Tensor& logits, std::span<const int> labels,
                              const std::array<double, 2>& class_weights) {
  Tape tape;
  return weighted_cross_entropy(tape.constant(logits), labels, class_weights)
      .value()
      .item();
}

Var mse(Var pred, Var target, std::span<const std::uint8_t> mask) {
  if (pred.shape() != target.shape()) {
    throw_contract("mse: shape mismatch " + shape_to_string(pred.shape()) + " vs " +
                   shape_to_string(target.shape()));
  }
  const std::size_t n = pred.value().numel();
  if (!mask.empty() && mask.size() != n) throw_contract("mse: mask shape mismatch");
  std::size_t count = 0;
  double total = 0.0;
  const auto& p = pred.value().storage();
  const auto& q = target.value().storage();
  for (std::size_t i = 0; i < n; ++i) {
    if (!mask.empty() && !mask[i]) continue;
    const double d = p[i] - q[i];
    total += d * d;
    ++count;
  }
  if (count == 0) {
    throw Error(ErrorKind::kContract, ErrorReason::kDegenerateMask,
                "mse: mask selects no cells");
  }
  std::shared_ptr<CellMask> sel;
  if (!mask.empty()) sel = std::make_shared<CellMask>(mask.begin(), mask.end());
  const double inv = 1.0 / static_cast<double>(count);
  return pred.tape()->record(
      Tensor::scalar(total * inv), {pred, target},
      [pred, target, sel, inv](Tape& t, const Tensor& g) {
        const auto& p = pred.value().storage();
        const auto& q = target.value().storage();
        double* gp = t.grad_sink(pred);
        double* gq = t.grad_sink(target);
        for (std::size_t i = 0; i < p.size(); ++i) {
          if (sel && !(*sel)[i]) continue;
          const double d = 2.0 * (p[i] - q[i]) * inv * g[0];
          if (gp) gp[i] += d;
          if (gq) gq[i] -= d;
        }
      });
}

double mse(const Tensor& pred, const Tensor& target,
           std::span<const std::uint8_t> mask) {
  Tape tape;
  return mse(tape.constant(pred), tape.constant(target), mask).value().item();
}

}  // namespace viskd::num
