// tests/nn/adam_test.cpp

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

#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

#include "doctest.h"
#include "tandem/common/error.hpp"
#include "tandem/nn/adam.hpp"
#include "tandem/nn/ops.hpp"

namespace {

using tandem::InvalidConfig;
using tandem::TrainingDiverged;
using tandem::nn::Adam;
using tandem::nn::NamedParam;
using tandem::nn::Tensor;
using tandem::nn::Variable;

TEST_CASE("adam minimizes a quadratic") {
  Variable w = Variable::leaf(Tensor({1}, {10.0}), true, "w");
  Adam opt({{"w", w}}, 0.1);
  for (int i = 0; i < 400; ++i) {
    opt.zero_grad();
    // loss = (w - 3)^2
    Variable diff = tandem::nn::add_scalar(w, -3.0);
    tandem::nn::sum(tandem::nn::mul(diff, diff)).backward();
    opt.step();
  }
  CHECK(w.value()[0] == doctest::Approx(3.0).epsilon(1e-3));
}

TEST_CASE("first step matches the update rule exactly") {
  const double lr = 0.01, wd = 0.1;
  const double w0 = 1.5, c = 0.6;
  Variable w = Variable::leaf(Tensor({1}, {w0}), true, "w");
  Adam opt({{"w", w}}, lr, wd);
  opt.zero_grad();
  tandem::nn::sum(tandem::nn::mul(w, Variable::leaf(Tensor({1}, {c}))))
      .backward();
  CHECK(w.grad()[0] == doctest::Approx(c).epsilon(1e-15));
  opt.step();

  const double g = c + wd * w0;
  const double m = (1.0 - 0.9) * g;
  const double v = (1.0 - 0.999) * g * g;
  const double mhat = m / (1.0 - 0.9);
  const double vhat = v / (1.0 - 0.999);
  const double expect = w0 - lr * mhat / (std::sqrt(vhat) + 1e-8);
  CHECK(w.value()[0] == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("parameters without gradients stay bit-identical") {
  Variable train = Variable::leaf(Tensor({2}, {1.0, 2.0}), true, "a");
  Variable frozen = Variable::leaf(Tensor({2}, {0.3, 0.7}), true, "b");
  const Tensor before = frozen.value();
  Adam opt({{"a", train}, {"b", frozen}}, 0.05);
  for (int i = 0; i < 10; ++i) {
    opt.zero_grad();
    tandem::nn::sum(tandem::nn::mul(train, train)).backward();
    opt.step();
  }
  CHECK(std::memcmp(before.data(), frozen.value().data(),
                    sizeof(double) * 2) == 0);
  CHECK(train.value()[0] != 1.0);
}

TEST_CASE("learning rate can change between steps") {
  Variable w = Variable::leaf(Tensor({1}, {1.0}), true, "w");
  Adam opt({{"w", w}}, 1e-2);
  CHECK(opt.lr() == 1e-2);
  opt.set_lr(1e-3);
  CHECK(opt.lr() == 1e-3);
}

TEST_CASE("invalid settings are rejected") {
  Variable w = Variable::leaf(Tensor({1}, {1.0}), true, "w");
  CHECK_THROWS_AS(Adam({{"w", w}}, 0.0), InvalidConfig);
  CHECK_THROWS_AS(Adam({{"w", w}}, 1e-3, -0.5), InvalidConfig);
}

TEST_CASE("non-finite gradients raise divergence") {
  Variable w = Variable::leaf(Tensor({1}, {1.0}), true, "w");
  Adam opt({{"w", w}}, 1e-3);
  w.node()->accumulate(Tensor({1}, {std::numeric_limits<double>::infinity()}));
  CHECK_THROWS_AS(opt.step(), TrainingDiverged);
}

}  // namespace
