// core/src/nn/layers.cpp

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

#include "tandem/nn/layers.hpp"

#include <cmath>

#include "tandem/common/error.hpp"

namespace tandem::nn {

Variable make_param(Tensor init, std::string name) {
  return Variable::leaf(std::move(init), true, std::move(name));
}

Tensor init_normal(std::vector<int> shape, double stddev, tandem::Rng& rng) {
  Tensor t(std::move(shape));
  for (std::size_t i = 0; i < t.numel(); ++i) t[i] = stddev * rng.normal();
  return t;
}

Tensor init_uniform(std::vector<int> shape, double bound, tandem::Rng& rng) {
  Tensor t(std::move(shape));
  for (std::size_t i = 0; i < t.numel(); ++i)
    t[i] = bound * (2.0 * rng.uniform() - 1.0);
  return t;
}

Conv1d::Conv1d(int in_ch, int out_ch, int kernel, int stride, int pad,
               tandem::Rng& rng)
    : stride_(stride), pad_(pad) {
  if (in_ch < 1 || out_ch < 1 || kernel < 1)
    throw InvalidConfig("Conv1d: extents must be positive");
  const double std = std::sqrt(2.0 / (static_cast<double>(in_ch) * kernel));
  w_ = make_param(init_normal({out_ch, in_ch, kernel}, std, rng), "w");
  b_ = make_param(Tensor({out_ch}, 0.0), "b");
}

Variable Conv1d::forward(const Variable& x) const {
  return conv1d(x, w_, b_, stride_, pad_);
}

void Conv1d::collect(const std::string& prefix, std::vector<NamedParam>& params,
                     std::vector<NamedBuffer>*) {
  params.push_back({prefix + ".w", w_});
  params.push_back({prefix + ".b", b_});
}

Conv2d::Conv2d(int in_ch, int out_ch, int kh, int kw, int stride_h,
               int stride_w, int pad_h, int pad_w, tandem::Rng& rng)
    : sh_(stride_h), sw_(stride_w), ph_(pad_h), pw_(pad_w) {
  if (in_ch < 1 || out_ch < 1 || kh < 1 || kw < 1)
    throw InvalidConfig("Conv2d: extents must be positive");
  const double std =
      std::sqrt(2.0 / (static_cast<double>(in_ch) * kh * kw));
  w_ = make_param(init_normal({out_ch, in_ch, kh, kw}, std, rng), "w");
  b_ = make_param(Tensor({out_ch}, 0.0), "b");
}

Variable Conv2d::forward(const Variable& x) const {
  return conv2d(x, w_, b_, sh_, sw_, ph_, pw_);
}

void Conv2d::collect(const std::string& prefix, std::vector<NamedParam>& params,
                     std::vector<NamedBuffer>*) {
  params.push_back({prefix + ".w", w_});
  params.push_back({prefix + ".b", b_});
}

Linear::Linear(int in_dim, int out_dim, tandem::Rng& rng) {
  if (in_dim < 1 || out_dim < 1)
    throw InvalidConfig("Linear: extents must be positive");
  const double std = std::sqrt(2.0 / static_cast<double>(in_dim));
  w_ = make_param(init_normal({out_dim, in_dim}, std, rng), "w");
  b_ = make_param(Tensor({out_dim}, 0.0), "b");
}

Variable Linear::forward(const Variable& x) const {
  return linear(x, w_, b_);
}

void Linear::collect(const std::string& prefix, std::vector<NamedParam>& params,
                     std::vector<NamedBuffer>*) {
  params.push_back({prefix + ".w", w_});
  params.push_back({prefix + ".b", b_});
}

BatchNorm::BatchNorm(int channels, double momentum, double eps)
    : running_mean_({channels}, 0.0),
      running_var_({channels}, 1.0),
      momentum_(momentum),
      eps_(eps) {
  if (channels < 1) throw InvalidConfig("BatchNorm: channels must be positive");
  gamma_ = make_param(Tensor({channels}, 1.0), "gamma");
  beta_ = make_param(Tensor({channels}, 0.0), "beta");
}

Variable BatchNorm::forward(const Variable& x, bool training,
                            const std::vector<int>* valid) {
  return batch_norm(x, gamma_, beta_, running_mean_, running_var_, training,
                    momentum_, eps_, valid);
}

void BatchNorm::collect(const std::string& prefix,
                        std::vector<NamedParam>& params,
                        std::vector<NamedBuffer>* buffers) {
  params.push_back({prefix + ".gamma", gamma_});
  params.push_back({prefix + ".beta", beta_});
  if (buffers) {
    buffers->push_back({prefix + ".running_mean", &running_mean_});
    buffers->push_back({prefix + ".running_var", &running_var_});
  }
}

LayerNorm::LayerNorm(int dim, double eps) : eps_(eps) {
  if (dim < 1) throw InvalidConfig("LayerNorm: dim must be positive");
  gamma_ = make_param(Tensor({dim}, 1.0), "gamma");
  beta_ = make_param(Tensor({dim}, 0.0), "beta");
}

Variable LayerNorm::forward(const Variable& x) const {
  return layer_norm(x, gamma_, beta_, eps_);
}

void LayerNorm::collect(const std::string& prefix,
                        std::vector<NamedParam>& params,
                        std::vector<NamedBuffer>*) {
  params.push_back({prefix + ".gamma", gamma_});
  params.push_back({prefix + ".beta", beta_});
}

Variable Dropout::forward(const Variable& x, bool training,
                          tandem::Rng& rng) const {
  return dropout(x, p_, training, rng);
}

GruBi::GruBi(int input_dim, int hidden, tandem::Rng& rng)
    : input_dim_(input_dim), hidden_(hidden) {
  if (input_dim < 1 || hidden < 1)
    throw InvalidConfig("GruBi: extents must be positive");
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  auto build = [&](Direction& d) {
    d.wz = make_param(init_uniform({hidden, input_dim}, bound, rng), "wz");
    d.wr = make_param(init_uniform({hidden, input_dim}, bound, rng), "wr");
    d.wh = make_param(init_uniform({hidden, input_dim}, bound, rng), "wh");
    d.uz = make_param(init_uniform({hidden, hidden}, bound, rng), "uz");
    d.ur = make_param(init_uniform({hidden, hidden}, bound, rng), "ur");
    d.uh = make_param(init_uniform({hidden, hidden}, bound, rng), "uh");
    d.bz = make_param(Tensor({hidden}, 0.0), "bz");
    d.br = make_param(Tensor({hidden}, 0.0), "br");
    d.bh = make_param(Tensor({hidden}, 0.0), "bh");
  };
  build(fwd_);
  build(bwd_);
}

Variable GruBi::run_direction(const Direction& dir, const Variable& x,
                              const std::vector<int>& lengths,
                              bool reverse) const {
  const int b = x.value().dim(0);
  const int t_len = x.value().dim(2);
  Variable h = Variable::leaf(Tensor({b, hidden_}, 0.0));
  std::vector<Variable> states(static_cast<std::size_t>(t_len));
  for (int step = 0; step < t_len; ++step) {
    const int t = reverse ? t_len - 1 - step : step;
    Variable xt = select_time(x, t);
    Variable z = sigmoid(add(linear(xt, dir.wz, dir.bz), matmul(h, dir.uz)));
    Variable r = sigmoid(add(linear(xt, dir.wr, dir.br), matmul(h, dir.ur)));
    Variable cand =
        vtanh(add(linear(xt, dir.wh, dir.bh), matmul(mul(r, h), dir.uh)));
    // h_new = (1 - z) * h + z * cand
    Variable h_new = add(sub(h, mul(z, h)), mul(z, cand));
    std::vector<double> step_mask(static_cast<std::size_t>(b));
    for (int i = 0; i < b; ++i)
      step_mask[static_cast<std::size_t>(i)] =
          t < lengths[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
    h = masked_update(h_new, h, step_mask);
    states[static_cast<std::size_t>(t)] = h;
  }
  return stack_time(states);
}

Variable GruBi::forward(const Variable& x,
                        const std::vector<int>& lengths) const {
  if (x.value().ndim() != 3 || x.value().dim(1) != input_dim_)
    throw InvalidInput("GruBi: input must be [b x " +
                       std::to_string(input_dim_) + " x t], got " +
                       x.value().shape_str());
  if (static_cast<int>(lengths.size()) != x.value().dim(0))
    throw InvalidInput("GruBi: lengths size mismatch");
  const int t_len = x.value().dim(2);
  for (int l : lengths)
    if (l < 1 || l > t_len) throw InvalidInput("GruBi: length out of range");
  Variable f = run_direction(fwd_, x, lengths, false);
  Variable r = run_direction(bwd_, x, lengths, true);
  return concat_channels(f, r);
}

void GruBi::collect_direction(Direction& dir, const std::string& prefix,
                              std::vector<NamedParam>& params) {
  params.push_back({prefix + ".wz", dir.wz});
  params.push_back({prefix + ".wr", dir.wr});
  params.push_back({prefix + ".wh", dir.wh});
  params.push_back({prefix + ".uz", dir.uz});
  params.push_back({prefix + ".ur", dir.ur});
  params.push_back({prefix + ".uh", dir.uh});
  params.push_back({prefix + ".bz", dir.bz});
  params.push_back({prefix + ".br", dir.br});
  params.push_back({prefix + ".bh", dir.bh});
}

void GruBi::collect(const std::string& prefix, std::vector<NamedParam>& params,
                    std::vector<NamedBuffer>*) {
  collect_direction(fwd_, prefix + ".fwd", params);
  collect_direction(bwd_, prefix + ".bwd", params);
}

}  // namespace tandem::nn
