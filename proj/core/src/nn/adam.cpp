// core/src/nn/adam.cpp

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

#include "tandem/nn/adam.hpp"

#include <cmath>

#include "tandem/common/error.hpp"

namespace tandem::nn {

namespace {
constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kEps = 1e-8;
}  // namespace

Adam::Adam(std::vector<NamedParam> params, double lr, double weight_decay)
    : params_(std::move(params)), lr_(lr), weight_decay_(weight_decay) {
  if (lr <= 0.0) throw InvalidConfig("Adam: learning rate must be positive");
  if (weight_decay < 0.0)
    throw InvalidConfig("Adam: weight decay must be nonnegative");
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  steps_.assign(params_.size(), 0);
  for (const auto& p : params_) {
    m_.emplace_back(p.value.value().shape(), 0.0);
    v_.emplace_back(p.value.value().shape(), 0.0);
  }
}

void Adam::step() {
  for (std::size_t i = 0; i < params_.size(); ++i) {
    Variable& p = params_[i].value;
    if (!p.has_grad()) continue;
    steps_[i] += 1;
    const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(steps_[i]));
    const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(steps_[i]));
    Tensor& value = p.mutable_value();
    const Tensor& grad = p.grad();
    for (std::size_t j = 0; j < value.numel(); ++j) {
      const double g = grad[j] + weight_decay_ * value[j];
      if (!std::isfinite(g))
        throw TrainingDiverged("Adam: non-finite gradient for " +
                               params_[i].name);
      m_[i][j] = kBeta1 * m_[i][j] + (1.0 - kBeta1) * g;
      v_[i][j] = kBeta2 * v_[i][j] + (1.0 - kBeta2) * g * g;
      const double mhat = m_[i][j] / bc1;
      const double vhat = v_[i][j] / bc2;
      value[j] -= lr_ * mhat / (std::sqrt(vhat) + kEps);
    }
  }
}

void Adam::zero_grad() {
  for (auto& p : params_) p.value.zero_grad();
}

}  // namespace tandem::nn
