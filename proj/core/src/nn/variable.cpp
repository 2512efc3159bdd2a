// core/src/nn/variable.cpp

// Copyright 2026  Tandem Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "tandem/nn/variable.hpp"

#include <algorithm>
#include <atomic>
#include <unordered_set>

#include "tandem/common/error.hpp"

namespace tandem::nn {

namespace {
thread_local int no_grad_depth = 0;
std::atomic<std::uint64_t> next_node_id{1};
}  // namespace

bool grad_enabled() { return no_grad_depth == 0; }

NoGradGuard::NoGradGuard() { ++no_grad_depth; }
NoGradGuard::~NoGradGuard() { --no_grad_depth; }

void VarNode::accumulate(const Tensor& g) {
  if (!requires_grad) return;
  if (grad.empty()) {
    grad = Tensor(value.shape());
  }
  grad.add_(g);
}

Variable Variable::leaf(Tensor value, bool requires_grad, std::string name) {
  auto n = std::make_shared<VarNode>();
  n->value = std::move(value);
  n->requires_grad = requires_grad;
  n->id = next_node_id.fetch_add(1, std::memory_order_relaxed);
  n->name = std::move(name);
  return Variable(std::move(n));
}

Variable Variable::op(Tensor value, std::vector<Variable> parents,
                      std::function<void(VarNode&)> backward) {
  auto n = std::make_shared<VarNode>();
  n->value = std::move(value);
  n->id = next_node_id.fetch_add(1, std::memory_order_relaxed);
  bool needs = false;
  if (grad_enabled()) {
    for (const auto& p : parents)
      if (p.defined() && p.requires_grad()) needs = true;
  }
  if (needs) {
    n->requires_grad = true;
    n->parents.reserve(parents.size());
    for (auto& p : parents) n->parents.push_back(p.node());
    n->backward = std::move(backward);
  }
  return Variable(std::move(n));
}

void Variable::zero_grad() {
  if (node_) node_->grad = Tensor();
}

Variable Variable::detach() const {
  if (!node_) return Variable();
  return leaf(node_->value, false);
}

void Variable::backward() {
  if (!node_) throw InvalidInput("backward: undefined variable");
  if (node_->value.numel() != 1)
    throw InvalidInput("backward: root must be scalar");
  if (!node_->requires_grad) return;

  // Collect the reachable grad-requiring subgraph.
  std::vector<std::shared_ptr<VarNode>> order;
  std::unordered_set<VarNode*> seen;
  std::vector<std::shared_ptr<VarNode>> stack{node_};
  seen.insert(node_.get());
  while (!stack.empty()) {
    auto n = stack.back();
    stack.pop_back();
    order.push_back(n);
    for (const auto& p : n->parents) {
      if (p->requires_grad && seen.insert(p.get()).second) stack.push_back(p);
    }
  }
  std::sort(order.begin(), order.end(),
            [](const auto& a, const auto& b) { return a->id > b->id; });

  Tensor seed(node_->value.shape());
  seed.fill(1.0);
  node_->accumulate(seed);

  for (const auto& n : order) {
    if (!n->backward || n->grad.empty()) continue;
    n->backward(*n);
    // Release the closure (and with it saved activations) eagerly; leaf
    // gradients survive in the nodes themselves.
    n->backward = nullptr;
    n->parents.clear();
    if (n.get() != node_.get() && n->name.empty())
      n->grad = Tensor();  // interior grads are never read again
  }
}

}  // namespace tandem::nn
