// tests/tasks/ctc_test.cpp

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

// The dynamic-programming loss is checked against a brute-force oracle that
// enumerates every alignment path, which is exact for tiny label spaces.

#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"
#include "../nn/grad_check.hpp"
#include "tandem/common/error.hpp"
#include "tandem/common/rng.hpp"
#include "tandem/nn/variable.hpp"
#include "tandem/tasks/ctc.hpp"

namespace {

using gradcheck::max_grad_error;
using gradcheck::random_tensor;
using tandem::InfeasibleTarget;
using tandem::InvalidInput;
using tandem::Rng;
using tandem::nn::Tensor;
using tandem::nn::Variable;
using tandem::tasks::ctc_collapse;
using tandem::tasks::ctc_greedy_decode;
using tandem::tasks::ctc_loss_op;
using tandem::tasks::ctc_min_frames;
using tandem::tasks::kCtcBlank;

// Sums the probability of every frame-wise path whose collapse equals the
// target. Exponential in the frame count; fine below ~8 frames.
double brute_force_nll(const Tensor& logits, const std::vector<int>& target) {
  const int symbols = logits.dim(0), frames = logits.dim(1);
  std::vector<std::vector<double>> prob(
      static_cast<std::size_t>(frames),
      std::vector<double>(static_cast<std::size_t>(symbols)));
  for (int t = 0; t < frames; ++t) {
    double mx = logits[static_cast<std::size_t>(t)];
    for (int k = 1; k < symbols; ++k)
      mx = std::max(mx, logits[static_cast<std::size_t>(k) * frames + t]);
    double z = 0.0;
    for (int k = 0; k < symbols; ++k)
      z += std::exp(logits[static_cast<std::size_t>(k) * frames + t] - mx);
    for (int k = 0; k < symbols; ++k)
      prob[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] =
          std::exp(logits[static_cast<std::size_t>(k) * frames + t] - mx) / z;
  }

  std::vector<int> path(static_cast<std::size_t>(frames));
  double total = 0.0;
  std::function<void(int, double)> walk = [&](int t, double p) {
    if (t == frames) {
      if (ctc_collapse(path) == target) total += p;
      return;
    }
    for (int k = 0; k < symbols; ++k) {
      path[static_cast<std::size_t>(t)] = k;
      walk(t + 1, p * prob[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)]);
    }
  };
  walk(0, 1.0);
  return -std::log(total);
}

TEST_CASE("collapse removes repeats then blanks") {
  CHECK(ctc_collapse({1, 1, 0, 2}) == std::vector<int>{1, 2});
  CHECK(ctc_collapse({1, 0, 1}) == std::vector<int>{1, 1});
  CHECK(ctc_collapse({0, 0, 0}) == std::vector<int>{});
  CHECK(ctc_collapse({}) == std::vector<int>{});
  CHECK(ctc_collapse({2, 2, 2, 1}) == std::vector<int>{2, 1});
}

TEST_CASE("greedy decode takes the frame-wise argmax then collapses") {
  // Per-frame winners: 1, 1, blank, 2.
  Tensor logits({3, 4}, {/* k=0 */ 0.1, 0.2, 5.0, 0.0,
                         /* k=1 */ 3.0, 4.0, 0.1, 0.2,
                         /* k=2 */ 0.3, 0.1, 0.2, 6.0});
  CHECK(ctc_greedy_decode(logits) == std::vector<int>{1, 2});
  CHECK_THROWS_AS(ctc_greedy_decode(Tensor({4}, 1.0)), InvalidInput);
}

TEST_CASE("minimum frame count accounts for repeated labels") {
  CHECK(ctc_min_frames({}) == 0);
  CHECK(ctc_min_frames({1}) == 1);
  CHECK(ctc_min_frames({1, 2}) == 2);
  CHECK(ctc_min_frames({1, 1}) == 3);
  CHECK(ctc_min_frames({1, 1, 1}) == 5);
  CHECK(ctc_min_frames({1, 2, 2, 3}) == 5);
}

TEST_CASE("loss matches the path-enumeration oracle") {
  Rng rng(61);
  const struct {
    int symbols, frames;
    std::vector<int> target;
  } cases[] = {
      {2, 1, {1}},        {2, 4, {1}},          {3, 4, {1, 2}},
      {3, 5, {2, 2}},     {4, 5, {1, 2, 3}},    {4, 6, {3, 1}},
      {3, 5, {}},         {4, 7, {2, 1, 2}},
  };
  for (const auto& c : cases) {
    Variable logits =
        Variable::leaf(random_tensor({c.symbols, c.frames}, rng, -2.0, 2.0));
    const double got = ctc_loss_op(logits, c.target).value().item();
    const double want = brute_force_nll(logits.value(), c.target);
    CHECK(got == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("empty target reduces to the all-blank log-probability") {
  Rng rng(62);
  Variable logits = Variable::leaf(random_tensor({3, 4}, rng, -1.5, 1.5));
  double want = 0.0;
  for (int t = 0; t < 4; ++t) {
    double z = 0.0;
    for (int k = 0; k < 3; ++k)
      z += std::exp(logits.value()[static_cast<std::size_t>(k) * 4 + t]);
    want -= logits.value()[static_cast<std::size_t>(t)] - std::log(z);
  }
  CHECK(ctc_loss_op(logits, {}).value().item() ==
        doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("gradient matches finite differences") {
  Rng rng(63);
  Variable logits =
      Variable::leaf(random_tensor({4, 5}, rng, -1.0, 1.0), true);
  CHECK(max_grad_error([&] { return ctc_loss_op(logits, {1, 2, 2}); },
                       {logits}) < 2e-5);

  // Softmax and posterior both sum to one, so columns of the gradient sum
  // to zero.
  Variable fresh =
      Variable::leaf(random_tensor({4, 5}, rng, -1.0, 1.0), true);
  ctc_loss_op(fresh, {1, 3}).backward();
  for (int t = 0; t < 5; ++t) {
    double col = 0.0;
    for (int k = 0; k < 4; ++k)
      col += fresh.grad()[static_cast<std::size_t>(k) * 5 + t];
    CHECK(col == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("infeasible and malformed targets are rejected") {
  Rng rng(64);
  Variable logits = Variable::leaf(random_tensor({3, 2}, rng));
  CHECK_THROWS_AS(ctc_loss_op(logits, {1, 1}), InfeasibleTarget);
  CHECK_THROWS_AS(ctc_loss_op(logits, {1, 2, 1}), InfeasibleTarget);
  CHECK_THROWS_AS(ctc_loss_op(logits, {kCtcBlank}), InvalidInput);
  CHECK_THROWS_AS(ctc_loss_op(logits, {3}), InvalidInput);
  CHECK_THROWS_AS(ctc_loss_op(logits, {-1}), InvalidInput);
  CHECK_THROWS_AS(ctc_loss_op(Variable::leaf(Tensor({4}, 0.0)), {1}),
                  InvalidInput);
  CHECK_THROWS_AS(ctc_loss_op(Variable::leaf(Tensor({1, 3}, 0.0)), {}),
                  InvalidInput);
}

}  // namespace
