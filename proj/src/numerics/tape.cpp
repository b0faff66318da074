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

#include "numerics/tape.hpp"

#include <limits>

#include "common/error.hpp"
#include "common/log.hpp"

namespace viskd::num {

const Tensor& Var::value() const {
  if (!tape_) throw_contract("use of an unbound Var");
  return tape_->value(id_);
}

bool Var::requires_grad() const { return tape_ && tape_->requires_grad(id_); }

const Tensor* Var::grad() const { return tape_ ? tape_->grad(id_) : nullptr; }

Var Tape::push(Node node) {
  if (nodes_.size() >= std::numeric_limits<std::uint32_t>::max()) {
    throw_contract("tape capacity exceeded");
  }
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<std::uint32_t>(nodes_.size() - 1));
}

Var Tape::leaf(Tensor value, bool requires_grad) {
  Node node;
  node.value = std::move(value);
  node.requires_grad = requires_grad;
  return push(std::move(node));
}

Var Tape::record(Tensor value, std::initializer_list<Var> inputs,
                 BackwardFn backward) {
  return record(std::move(value), std::vector<Var>(inputs), std::move(backward));
}

Var Tape::record(Tensor value, const std::vector<Var>& inputs,
                 BackwardFn backward) {
  Node node;
  node.value = std::move(value);
  for (const Var& in : inputs) {
    if (in.tape() != this) throw_contract("op mixes Vars from different tapes");
    node.inputs.push_back(in.id());
    node.requires_grad = node.requires_grad || nodes_[in.id()].requires_grad;
  }
  if (node.requires_grad) node.backward = std::move(backward);
  return push(std::move(node));
}

const Tensor* Tape::grad(std::uint32_t id) const {
  const Node& n = nodes_[id];
  return n.has_grad ? &n.grad : nullptr;
}

double* Tape::grad_sink(Var v) {
  Node& n = nodes_[v.id()];
  if (!n.requires_grad) return nullptr;
  if (!n.has_grad) {
    n.grad = Tensor(n.value.shape(), 0.0);
    n.has_grad = true;
  }
  return n.grad.data().data();
}

void Tape::backward(Var root) {
  if (root.tape() != this) throw_contract("backward root from another tape");
  Node& r = nodes_[root.id()];
  if (!r.value.is_scalar()) {
    throw_contract("backward root must be a scalar, got shape " +
                   shape_to_string(r.value.shape()));
  }
  visits_ = 0;
  if (!r.requires_grad) {
    log::warning("backward() on a root that does not require grad; no-op");
    return;
  }
  for (Node& n : nodes_) {
    n.has_grad = false;
    n.grad = Tensor();
  }
  std::vector<bool> reachable(root.id() + 1, false);
  reachable[root.id()] = true;
  for (std::uint32_t id = root.id() + 1; id-- > 0;) {
    if (!reachable[id]) continue;
    for (std::uint32_t in : nodes_[id].inputs) {
      if (nodes_[in].requires_grad) reachable[in] = true;
    }
  }
  r.grad = Tensor(r.value.shape(), 1.0);
  r.has_grad = true;
  for (std::uint32_t id = root.id() + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (!reachable[id] || !n.has_grad || !n.backward) continue;
    // nodes_ does not resize during backward, so the reference stays valid.
    n.backward(*this, n.grad);
    ++visits_;
  }
}

}  // namespace viskd::num
