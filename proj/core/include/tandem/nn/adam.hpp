// core/include/tandem/nn/adam.hpp

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

#ifndef TANDEM_NN_ADAM_HPP_
#define TANDEM_NN_ADAM_HPP_

#include <cstdint>
#include <vector>

#include "tandem/nn/layers.hpp"

namespace tandem::nn {

// Adam with decoupled-from-nothing classic L2: the decay term is added to
// the gradient before the moment updates. Parameters that carry no gradient
// on a step are left untouched, including their moments, so a frozen model
// stays bit-identical while another one trains.
class Adam {
 public:
  explicit Adam(std::vector<NamedParam> params, double lr,
                double weight_decay = 0.0);

  void set_lr(double lr) { lr_ = lr; }
  double lr() const { return lr_; }

  void step();
  void zero_grad();

  const std::vector<NamedParam>& params() const { return params_; }

 private:
  std::vector<NamedParam> params_;
  std::vector<Tensor> m_, v_;
  std::vector<std::int64_t> steps_;
  double lr_;
  double weight_decay_;
};

}  // namespace tandem::nn

#endif  // TANDEM_NN_ADAM_HPP_
