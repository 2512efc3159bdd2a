// core/src/tasks/ctc.cpp

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

#include "tandem/tasks/ctc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "tandem/common/error.hpp"

namespace tandem::tasks {

namespace nn = tandem::nn;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-(std::abs(a - b))));
}

// Row-major [frames x symbols] log-softmax of column-major-in-time logits.
std::vector<double> log_probs_of(const nn::Tensor& logits) {
  const int s = logits.dim(0), t_count = logits.dim(1);
  std::vector<double> lp(static_cast<std::size_t>(s) * t_count);
  for (int t = 0; t < t_count; ++t) {
    double mx = kNegInf;
    for (int k = 0; k < s; ++k)
      mx = std::max(mx, logits[static_cast<std::size_t>(k) * t_count + t]);
    double z = 0.0;
    for (int k = 0; k < s; ++k)
      z += std::exp(logits[static_cast<std::size_t>(k) * t_count + t] - mx);
    const double lse = mx + std::log(z);
    for (int k = 0; k < s; ++k)
      lp[static_cast<std::size_t>(t) * s + k] =
          logits[static_cast<std::size_t>(k) * t_count + t] - lse;
  }
  return lp;
}

}  // namespace

int ctc_min_frames(const std::vector<int>& target) {
  int needed = static_cast<int>(target.size());
  for (std::size_t i = 1; i < target.size(); ++i)
    if (target[i] == target[i - 1]) ++needed;
  return needed;
}

nn::Variable ctc_loss_op(const nn::Variable& logits,
                         const std::vector<int>& target) {
  const nn::Tensor& lv = logits.value();
  if (lv.ndim() != 2)
    throw InvalidInput("ctc: expected logits [symbols x frames], got " +
                       lv.shape_str());
  const int symbols = lv.dim(0), frames = lv.dim(1);
  if (symbols < 2) throw InvalidInput("ctc: need the blank plus one symbol");
  for (int id : target)
    if (id <= kCtcBlank || id >= symbols)
      throw InvalidInput("ctc: target id " + std::to_string(id) +
                         " outside [1, " + std::to_string(symbols - 1) + "]");
  if (frames < ctc_min_frames(target))
    throw InfeasibleTarget(
        "ctc: " + std::to_string(frames) + " frames cannot carry a target of " +
        std::to_string(target.size()) + " tokens (needs " +
        std::to_string(ctc_min_frames(target)) + ")");

  // Extended label sequence with interleaved blanks.
  const int u = static_cast<int>(target.size());
  const int ext = 2 * u + 1;
  std::vector<int> lab(static_cast<std::size_t>(ext), kCtcBlank);
  for (int i = 0; i < u; ++i) lab[static_cast<std::size_t>(2 * i + 1)] = target[static_cast<std::size_t>(i)];

  const std::vector<double> lp = log_probs_of(lv);
  auto lp_at = [&](int t, int k) {
    return lp[static_cast<std::size_t>(t) * symbols + k];
  };
  auto allow_skip = [&](int s) {
    return s >= 2 && lab[static_cast<std::size_t>(s)] != kCtcBlank &&
           lab[static_cast<std::size_t>(s)] != lab[static_cast<std::size_t>(s - 2)];
  };

  std::vector<double> alpha(static_cast<std::size_t>(frames) * ext, kNegInf);
  alpha[0] = lp_at(0, kCtcBlank);
  if (ext > 1) alpha[1] = lp_at(0, lab[1]);
  for (int t = 1; t < frames; ++t)
    for (int s = 0; s < ext; ++s) {
      double acc = alpha[static_cast<std::size_t>(t - 1) * ext + s];
      if (s >= 1)
        acc = log_add(acc, alpha[static_cast<std::size_t>(t - 1) * ext + s - 1]);
      if (allow_skip(s))
        acc = log_add(acc, alpha[static_cast<std::size_t>(t - 1) * ext + s - 2]);
      if (acc != kNegInf)
        alpha[static_cast<std::size_t>(t) * ext + s] =
            acc + lp_at(t, lab[static_cast<std::size_t>(s)]);
    }

  double log_total = alpha[static_cast<std::size_t>(frames - 1) * ext + ext - 1];
  if (ext > 1)
    log_total = log_add(
        log_total, alpha[static_cast<std::size_t>(frames - 1) * ext + ext - 2]);
  if (!std::isfinite(log_total))
    throw InfeasibleTarget("ctc: no feasible alignment");

  nn::Tensor value({1}, -log_total);
  if (!nn::grad_enabled() || !logits.requires_grad())
    return nn::Variable::op(std::move(value), {logits}, nullptr);

  // beta[t][s]: log-probability of completing the extended sequence from
  // state s given that frame t already emitted lab[s]; the two exit states
  // at the last frame carry zero.
  std::vector<double> beta(static_cast<std::size_t>(frames) * ext, kNegInf);
  beta[static_cast<std::size_t>(frames - 1) * ext + ext - 1] = 0.0;
  if (ext > 1) beta[static_cast<std::size_t>(frames - 1) * ext + ext - 2] = 0.0;
  for (int t = frames - 2; t >= 0; --t)
    for (int s = 0; s < ext; ++s) {
      double acc = beta[static_cast<std::size_t>(t + 1) * ext + s] +
                   lp_at(t + 1, lab[static_cast<std::size_t>(s)]);
      if (s + 1 < ext)
        acc = log_add(acc, beta[static_cast<std::size_t>(t + 1) * ext + s + 1] +
                               lp_at(t + 1, lab[static_cast<std::size_t>(s + 1)]));
      if (s + 2 < ext && allow_skip(s + 2))
        acc = log_add(acc, beta[static_cast<std::size_t>(t + 1) * ext + s + 2] +
                               lp_at(t + 1, lab[static_cast<std::size_t>(s + 2)]));
      beta[static_cast<std::size_t>(t) * ext + s] = acc;
    }

  // d(-log_total)/d logits = softmax - symbol posterior.
  auto grad = std::make_shared<nn::Tensor>(lv.shape());
  for (int t = 0; t < frames; ++t) {
    std::vector<double> post(static_cast<std::size_t>(symbols), kNegInf);
    for (int s = 0; s < ext; ++s) {
      const double ab = alpha[static_cast<std::size_t>(t) * ext + s] +
                        beta[static_cast<std::size_t>(t) * ext + s];
      const int k = lab[static_cast<std::size_t>(s)];
      post[static_cast<std::size_t>(k)] =
          log_add(post[static_cast<std::size_t>(k)], ab);
    }
    for (int k = 0; k < symbols; ++k) {
      const double p = post[static_cast<std::size_t>(k)] == kNegInf
                           ? 0.0
                           : std::exp(post[static_cast<std::size_t>(k)] - log_total);
      (*grad)[static_cast<std::size_t>(k) * frames + t] =
          std::exp(lp_at(t, k)) - p;
    }
  }

  return nn::Variable::op(std::move(value), {logits},
                          [grad](nn::VarNode& self) {
                            const double g = self.grad[0];
                            nn::Tensor gx(grad->shape());
                            for (std::size_t i = 0; i < gx.numel(); ++i)
                              gx[i] = g * (*grad)[i];
                            self.parents[0]->accumulate(gx);
                          });
}

std::vector<int> ctc_greedy_decode(const nn::Tensor& logits) {
  if (logits.ndim() != 2)
    throw InvalidInput("ctc: expected logits [symbols x frames], got " +
                       logits.shape_str());
  const int symbols = logits.dim(0), frames = logits.dim(1);
  std::vector<int> path(static_cast<std::size_t>(frames));
  for (int t = 0; t < frames; ++t) {
    int best = 0;
    double best_v = logits[static_cast<std::size_t>(t)];
    for (int k = 1; k < symbols; ++k) {
      const double v = logits[static_cast<std::size_t>(k) * frames + t];
      if (v > best_v) {
        best_v = v;
        best = k;
      }
    }
    path[static_cast<std::size_t>(t)] = best;
  }
  return ctc_collapse(path);
}

std::vector<int> ctc_collapse(const std::vector<int>& path) {
  std::vector<int> out;
  int prev = -1;
  for (int id : path) {
    if (id != prev && id != kCtcBlank) out.push_back(id);
    prev = id;
  }
  return out;
}

}  // namespace tandem::tasks
