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
#include <span>
#include <vector>

#include "common/rng.hpp"
#include "numerics/tape.hpp"

namespace viskd::num {

enum class Activation { kRelu, kGelu };

// Elementwise ops require identical shapes; there is no implicit broadcast
// except where noted.
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var a, double factor);
Var square(Var a);
Var sum(Var a);
Var mean(Var a);

/// a[..., k] x w[k, n] -> [..., n]; leading axes of `a` are flattened.
Var matmul(Var a, Var w);
/// x[..., n] + bias[n], broadcast over leading axes.
Var add_bias(Var x, Var bias);
inline Var linear(Var x, Var w, Var b) { return add_bias(matmul(x, w), b); }

Var relu(Var x);
Var gelu(Var x);
Var activate(Var x, Activation activation);

/// Normalizes over the last axis, then applies gamma/beta.
Var layer_norm(Var x, Var gamma, Var beta, double eps = 1e-5);

/// Numerically stable softmax over the last axis.
Var softmax(Var x);

/// Multi-head scaled dot-product attention over q, k, v of shape [B, T, D];
/// heads split D into n_heads contiguous slices. No masking.
Var attention(Var q, Var k, Var v, std::size_t n_heads);

/// Inverted dropout. In eval mode (or with rate 0) returns `x` itself.
Var dropout(Var x, double rate, bool train, Rng& rng);

Var concat(const std::vector<Var>& parts, std::size_t axis);
Var slice(Var x, std::size_t axis, std::size_t begin, std::size_t end);
Var reshape(Var x, Shape shape);

/// Rows of table[V, D] selected by ids -> [ids.size(), D].
Var embedding(Var table, std::span<const std::size_t> ids);

/// linear -> activation -> linear.
Var feed_forward(Var x, Var w1, Var b1, Var w2, Var b2, Activation activation);

/// Value-level row softmax over the last axis. Throws a numeric-input error
/// on non-finite logits.
Tensor softmax_rows(const Tensor& logits);

}  // namespace viskd::num
