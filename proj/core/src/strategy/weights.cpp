// core/src/strategy/weights.cpp

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

#include "tandem/strategy/weights.hpp"

#include <cmath>

#include "tandem/common/error.hpp"
#include "tandem/nn/ops.hpp"

namespace tandem::strategy {

SampleWeights normalize_weights(const std::vector<double>& ca_losses) {
  if (ca_losses.empty())
    throw InvalidInput("normalize_weights: empty batch");
  double total = 0.0;
  for (double l : ca_losses) {
    if (!std::isfinite(l))
      throw InvalidInput("normalize_weights: non-finite loss");
    if (l < 0.0)
      throw InvalidInput("normalize_weights: negative loss");
    total += l;
  }
  SampleWeights w;
  w.values.resize(ca_losses.size());
  if (total == 0.0) {
    const double uniform = 1.0 / static_cast<double>(ca_losses.size());
    for (auto& v : w.values) v = uniform;
    return w;
  }
  for (std::size_t i = 0; i < ca_losses.size(); ++i)
    w.values[i] = ca_losses[i] / total;
  return w;
}

nn::Variable weighted_ae_loss(const std::vector<nn::Variable>& per_sample_ae,
                              const SampleWeights& w) {
  if (per_sample_ae.size() != w.values.size())
    throw InvalidInput("weighted_ae_loss: " +
                       std::to_string(per_sample_ae.size()) + " losses but " +
                       std::to_string(w.values.size()) + " weights");
  return nn::weighted_sum(per_sample_ae, w.values,
                          static_cast<double>(per_sample_ae.size()));
}

nn::Variable mtl_loss(const nn::Variable& ae_loss,
                      const nn::Variable& ca_loss) {
  if (ae_loss.value().numel() != 1 || ca_loss.value().numel() != 1)
    throw InvalidInput("mtl_loss: expected scalar losses");
  return nn::add(ae_loss, ca_loss);
}

double weight_entropy(const SampleWeights& w) {
  double h = 0.0;
  for (double v : w.values)
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

}  // namespace tandem::strategy
