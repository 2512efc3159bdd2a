// core/include/tandem/nn/ops.hpp

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

#ifndef TANDEM_NN_OPS_HPP_
#define TANDEM_NN_OPS_HPP_

#include <vector>

#include "tandem/common/rng.hpp"
#include "tandem/nn/variable.hpp"

namespace tandem::nn {

// ---- elementwise (same-shape operands) ----
Variable add(const Variable& a, const Variable& b);
Variable sub(const Variable& a, const Variable& b);
Variable mul(const Variable& a, const Variable& b);
Variable add_scalar(const Variable& a, double c);
Variable mul_scalar(const Variable& a, double c);
Variable neg(const Variable& a);
Variable vexp(const Variable& a);
Variable vlog(const Variable& a);           // requires positive entries
Variable log_floor(const Variable& a, double eps);  // log(a + eps)
Variable vsqrt(const Variable& a);
Variable relu(const Variable& a);
Variable gelu(const Variable& a);  // exact erf form
Variable sigmoid(const Variable& a);
Variable vtanh(const Variable& a);

// ---- reductions ----
Variable sum(const Variable& a);
Variable mean(const Variable& a);

// Scalar combination (1/denom) * sum_i coeff_i * items_i. Coefficients are
// gradient constants; this is the reduction used by weighted losses.
Variable weighted_sum(const std::vector<Variable>& items,
                      const std::vector<double>& coeffs, double denom);

// ---- linear algebra ----
// a: [m x k], b: [k x n] -> [m x n]
Variable matmul(const Variable& a, const Variable& b);
// x: [n x in], w: [out x in], b: [out] -> [n x out]
Variable linear(const Variable& x, const Variable& w, const Variable& b);
// m: [r x f] constant, x: [f x t] -> [r x t]; used for filterbank/DCT.
Variable matmul_const_left(const Tensor& m, const Variable& x);

// ---- shape ----
Variable reshape(const Variable& a, std::vector<int> shape);
// x: [b x c1 x ...], y: [b x c2 x ...] -> [b x (c1+c2) x ...]
Variable concat_channels(const Variable& a, const Variable& b);
// x: [b x c x ...] -> [b x (to-from) x ...]
Variable slice_channels(const Variable& a, int from, int to);
// x: [b x ...] -> [...], one batch item
Variable select_item(const Variable& a, int index);
// x: [... x t] -> [... x to], prefix along the last axis
Variable slice_last(const Variable& a, int to);
// steps: list of [b x d] -> [b x d x t]
Variable stack_time(const std::vector<Variable>& steps);
// x: [b x d x t] -> [b x d], one time step
Variable select_time(const Variable& a, int t);
// x: [... x t] -> [... x to], zero-padded suffix; to >= t
Variable pad_last(const Variable& a, int to);
// items: list of [shape] -> [n x shape]; used to batch per-clip features
Variable stack_batch(const std::vector<Variable>& items);
// x: [b x ... x t]; zeroes positions >= valid[b] along the last axis so
// padded frames stay exactly zero through stacked conv blocks
Variable mask_last(const Variable& a, const std::vector<int>& valid);

// ---- convolution and pooling ----
// x: [b x c x l], w: [o x c x k], bias: [o] -> [b x o x l']
Variable conv1d(const Variable& x, const Variable& w, const Variable& bias,
                int stride, int pad);
// x: [b x c x h x w], w: [o x c x kh x kw] -> [b x o x h' x w']
Variable conv2d(const Variable& x, const Variable& w, const Variable& bias,
                int stride_h, int stride_w, int pad_h, int pad_w);
Variable max_pool1d(const Variable& x, int k);             // stride = k
Variable max_pool2d(const Variable& x, int kh, int kw);    // stride = kernel
Variable global_avg_pool(const Variable& x);               // [b x c x ...] -> [b x c]
// Mean over valid positions only: for [b x c x l] valid is a length bound on
// l; for [b x c x h x w] it bounds w (the time axis).
Variable masked_global_avg_pool(const Variable& x,
                                const std::vector<int>& valid);

// ---- normalization, regularization ----
// x: [b x c x ...spatial]; gamma/beta: [c]. Training mode normalizes by
// batch statistics and updates running stats in place; eval mode uses the
// running stats. `valid` (optional) bounds the last axis per item so padded
// positions do not contaminate the statistics.
Variable batch_norm(const Variable& x, const Variable& gamma,
                    const Variable& beta, Tensor& running_mean,
                    Tensor& running_var, bool training, double momentum,
                    double eps, const std::vector<int>* valid = nullptr);
// x: [n x d], gamma/beta: [d]; normalizes each row.
Variable layer_norm(const Variable& x, const Variable& gamma,
                    const Variable& beta, double eps);
Variable dropout(const Variable& x, double p, bool training, tandem::Rng& rng);

// ---- frequency-axis helpers (dim order [b x c x f x t]) ----
Variable reflect_pad_freq(const Variable& x, int target_f);
Variable crop_freq(const Variable& x, int target_f);
Variable upsample_freq2(const Variable& x);  // nearest, f -> 2f

// Per-item convex update h = m * a + (1-m) * b with a constant 0/1 mask per
// batch row; the sequence models use it to hold state on padded steps.
Variable masked_update(const Variable& a, const Variable& b,
                       const std::vector<double>& item_mask);

// ---- losses ----
// logits: [n x k], targets: class index per row -> [n] losses, -log softmax.
Variable cross_entropy_per_row(const Variable& logits,
                               const std::vector<int>& targets);

}  // namespace tandem::nn

#endif  // TANDEM_NN_OPS_HPP_
