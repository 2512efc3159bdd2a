// core/include/tandem/nn/layers.hpp

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

#ifndef TANDEM_NN_LAYERS_HPP_
#define TANDEM_NN_LAYERS_HPP_

#include <string>
#include <vector>

#include "tandem/common/rng.hpp"
#include "tandem/nn/ops.hpp"
#include "tandem/nn/variable.hpp"

namespace tandem::nn {

struct NamedParam {
  std::string name;
  Variable value;
};

// Non-trainable state that still belongs in a checkpoint.
struct NamedBuffer {
  std::string name;
  Tensor* value;
};

Variable make_param(Tensor init, std::string name);
Tensor init_normal(std::vector<int> shape, double stddev, tandem::Rng& rng);
Tensor init_uniform(std::vector<int> shape, double bound, tandem::Rng& rng);

class Conv1d {
 public:
  Conv1d(int in_ch, int out_ch, int kernel, int stride, int pad,
         tandem::Rng& rng);
  Variable forward(const Variable& x) const;
  void collect(const std::string& prefix, std::vector<NamedParam>& params,
               std::vector<NamedBuffer>* buffers = nullptr);

 private:
  Variable w_, b_;
  int stride_, pad_;
};

class Conv2d {
 public:
  Conv2d(int in_ch, int out_ch, int kh, int kw, int stride_h, int stride_w,
         int pad_h, int pad_w, tandem::Rng& rng);
  Variable forward(const Variable& x) const;
  void collect(const std::string& prefix, std::vector<NamedParam>& params,
               std::vector<NamedBuffer>* buffers = nullptr);

 private:
  Variable w_, b_;
  int sh_, sw_, ph_, pw_;
};

class Linear {
 public:
  Linear(int in_dim, int out_dim, tandem::Rng& rng);
  Variable forward(const Variable& x) const;
  void collect(const std::string& prefix, std::vector<NamedParam>& params,
               std::vector<NamedBuffer>* buffers = nullptr);

 private:
  Variable w_, b_;
};

class BatchNorm {
 public:
  explicit BatchNorm(int channels, double momentum = 0.1, double eps = 1e-5);
  Variable forward(const Variable& x, bool training,
                   const std::vector<int>* valid = nullptr);
  void collect(const std::string& prefix, std::vector<NamedParam>& params,
               std::vector<NamedBuffer>* buffers = nullptr);

 private:
  Variable gamma_, beta_;
  Tensor running_mean_, running_var_;
  double momentum_, eps_;
};

class LayerNorm {
 public:
  explicit LayerNorm(int dim, double eps = 1e-5);
  Variable forward(const Variable& x) const;
  void collect(const std::string& prefix, std::vector<NamedParam>& params,
               std::vector<NamedBuffer>* buffers = nullptr);

 private:
  Variable gamma_, beta_;
  double eps_;
};

class Dropout {
 public:
  explicit Dropout(double p) : p_(p) {}
  Variable forward(const Variable& x, bool training, tandem::Rng& rng) const;

 private:
  double p_;
};

// Bidirectional gated recurrent layer over [b x d x t] sequences. Padded
// steps are held constant through a per-item step mask, so states at valid
// positions do not depend on how far the batch is padded.
class GruBi {
 public:
  GruBi(int input_dim, int hidden, tandem::Rng& rng);
  // lengths: valid step count per item. Output [b x 2*hidden x t].
  Variable forward(const Variable& x, const std::vector<int>& lengths) const;
  void collect(const std::string& prefix, std::vector<NamedParam>& params,
               std::vector<NamedBuffer>* buffers = nullptr);

  int hidden() const { return hidden_; }

 private:
  struct Direction {
    Variable wz, wr, wh;  // [h x d] input projections
    Variable uz, ur, uh;  // [h x h] recurrent, used as h * u
    Variable bz, br, bh;  // [h]
  };
  Variable run_direction(const Direction& dir, const Variable& x,
                         const std::vector<int>& lengths, bool reverse) const;
  void collect_direction(Direction& dir, const std::string& prefix,
                         std::vector<NamedParam>& params);

  int input_dim_, hidden_;
  Direction fwd_, bwd_;
};

}  // namespace tandem::nn

#endif  // TANDEM_NN_LAYERS_HPP_
