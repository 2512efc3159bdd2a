// core/include/tandem/nn/variable.hpp

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

#ifndef TANDEM_NN_VARIABLE_HPP_
#define TANDEM_NN_VARIABLE_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "tandem/nn/tensor.hpp"

namespace tandem::nn {

// Reverse-mode gradient recording is on unless a NoGradGuard is alive on the
// current thread. Ops built while recording is off are detached constants.
bool grad_enabled();

class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;
};

// One node of the dynamic computation graph. Nodes carry a monotonically
// increasing id; the backward pass processes reachable nodes in decreasing
// id order, which is a reverse topological order of the construction
// sequence and makes gradient accumulation order deterministic.
struct VarNode {
  Tensor value;
  Tensor grad;  // empty until the first accumulation
  bool requires_grad = false;
  std::uint64_t id = 0;
  std::string name;
  std::vector<std::shared_ptr<VarNode>> parents;
  std::function<void(VarNode&)> backward;

  void accumulate(const Tensor& g);
};

// Value handle. Copies share the underlying node.
class Variable {
 public:
  Variable() = default;

  // Leaf carrying data; parameters pass requires_grad = true and a name.
  static Variable leaf(Tensor value, bool requires_grad = false,
                       std::string name = "");

  // Interior op node. The backward callback reads self.grad and accumulates
  // into self.parents. When recording is off or no parent requires a
  // gradient, parents and callback are dropped and the result is a constant.
  static Variable op(Tensor value, std::vector<Variable> parents,
                     std::function<void(VarNode&)> backward);

  bool defined() const { return node_ != nullptr; }
  const Tensor& value() const { return node_->value; }
  Tensor& mutable_value() { return node_->value; }
  const Tensor& grad() const { return node_->grad; }
  bool has_grad() const { return !node_->grad.empty(); }
  bool requires_grad() const { return node_ && node_->requires_grad; }
  const std::string& name() const { return node_->name; }

  void zero_grad();

  // Shares the value, drops the graph.
  Variable detach() const;

  // Reverse pass from a scalar root; seeds with 1 and releases each node's
  // callback after use so saved activations free as the pass proceeds.
  void backward();

  const std::shared_ptr<VarNode>& node() const { return node_; }

 private:
  explicit Variable(std::shared_ptr<VarNode> n) : node_(std::move(n)) {}
  std::shared_ptr<VarNode> node_;
};

}  // namespace tandem::nn

#endif  // TANDEM_NN_VARIABLE_HPP_
