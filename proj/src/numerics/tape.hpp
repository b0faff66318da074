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
#include <cstdint>
#include <functional>
#include <vector>

#include "numerics/tensor.hpp"

namespace viskd::num {

class Tape;

/// Handle to a node recorded on a Tape. Cheap to copy; valid for the
/// lifetime of the tape that produced it.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, std::uint32_t id) : tape_(tape), id_(id) {}

  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
  bool requires_grad() const;
  /// Null until backward() reached this node.
  const Tensor* grad() const;

  Tape* tape() const noexcept { return tape_; }
  std::uint32_t id() const noexcept { return id_; }

 private:
  Tape* tape_ = nullptr;
  std::uint32_t id_ = 0;
};

/// Reverse-mode recording of a single forward pass. Nodes are appended in
/// execution order, which is a topological order.
class Tape {
 public:
  /// Receives the gradient of the node's output and accumulates into its
  /// inputs through Tape::grad_sink.
  using BackwardFn = std::function<void(Tape&, const Tensor& grad_out)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var leaf(Tensor value, bool requires_grad = false);
  Var constant(Tensor value) { return leaf(std::move(value), false); }

  /// Records an op output. The node requires grad iff any input does; when
  /// it does not, `backward` is dropped.
  Var record(Tensor value, std::initializer_list<Var> inputs,
             BackwardFn backward);
  Var record(Tensor value, const std::vector<Var>& inputs,
             BackwardFn backward);

  const Tensor& value(std::uint32_t id) const { return nodes_[id].value; }
  bool requires_grad(std::uint32_t id) const {
    return nodes_[id].requires_grad;
  }
  const Tensor* grad(std::uint32_t id) const;

  /// Zero-initialized gradient buffer for `v`, or nullptr when `v` does not
  /// require grad. Only valid inside backward.
  double* grad_sink(Var v);

  /// Propagates d(root)/d(node) to every reachable node that requires grad.
  /// Root must be a scalar. A root that does not require grad is a no-op
  /// with a warning.
  void backward(Var root);

  std::size_t size() const noexcept { return nodes_.size(); }
  /// Number of backward callbacks invoked by the last backward().
  std::size_t last_backward_visits() const noexcept { return visits_; }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    bool requires_grad = false;
    bool has_grad = false;
    std::vector<std::uint32_t> inputs;
    BackwardFn backward;
  };

  Var push(Node node);

  std::vector<Node> nodes_;
  std::size_t visits_ = 0;
};

}  // namespace viskd::num
