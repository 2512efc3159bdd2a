// core/include/tandem/strategy/weights.hpp

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

#ifndef TANDEM_STRATEGY_WEIGHTS_HPP_
#define TANDEM_STRATEGY_WEIGHTS_HPP_

#include <vector>

#include "tandem/nn/variable.hpp"

namespace tandem::strategy {

// Per-batch sample importance; always on the probability simplex.
struct SampleWeights {
  std::vector<double> values;
};

// Linear weights w_i = L_i / sum(L): a sample weighs as much as its share of
// the batch's task loss. All-zero losses (a perfect task model) fall back to
// uniform weights since the ratio is undefined there.
SampleWeights normalize_weights(const std::vector<double>& ca_losses);

// (1/N) * sum_i w_i * L_i with the weights as plain constants, so no
// gradient leaks from the enhancement loss into the task model that
// produced the weights.
nn::Variable weighted_ae_loss(const std::vector<nn::Variable>& per_sample_ae,
                              const SampleWeights& w);

// Joint loss of the multi-task setting: a plain sum. The task term reaches
// the enhancer through the enhanced audio; the enhancement term touches only
// enhancer parameters because the task model never enters its graph.
nn::Variable mtl_loss(const nn::Variable& ae_loss, const nn::Variable& ca_loss);

// Shannon entropy in nats; ln(N) for uniform weights, 0 for one-hot.
double weight_entropy(const SampleWeights& w);

}  // namespace tandem::strategy

#endif  // TANDEM_STRATEGY_WEIGHTS_HPP_
