// tests/nn/signal_ops_test.cpp

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

// The transform adjoints are the linchpin of the whole enhancement path, so
// they are checked two ways: elementwise finite differences on the op alone,
// and finite differences through the full mask -> inverse transform -> loss
// composite that training actually uses.

#include <cmath>
#include <vector>

#include "doctest.h"
#include "grad_check.hpp"
#include "tandem/common/rng.hpp"
#include "tandem/nn/ops.hpp"
#include "tandem/nn/signal_ops.hpp"
#include "tandem/signal/sdr.hpp"
#include "tandem/signal/stft.hpp"

namespace {

using gradcheck::max_grad_error;
using gradcheck::project;
using gradcheck::random_tensor;
using tandem::Rng;
using tandem::nn::Tensor;
using tandem::nn::Variable;
using tandem::signal::ComplexSpectrogram;
using tandem::signal::StftConfig;
using tandem::signal::Waveform;
using tandem::signal::Window;
using namespace tandem::nn;

StftConfig small_config() {
  StftConfig cfg;
  cfg.window_length = 16;
  cfg.hop_length = 8;
  cfg.fft_size = 16;
  cfg.window = Window::kHann;
  return cfg;
}

Waveform make_wave(const Tensor& t) {
  Waveform w;
  w.samples.assign(t.data(), t.data() + t.numel());
  w.sample_rate = tandem::signal::kSampleRate;
  return w;
}

TEST_CASE("stft_op forward matches the plain transform") {
  Rng rng(41);
  const StftConfig cfg = small_config();
  Variable x = Variable::leaf(random_tensor({50}, rng), true);
  const Tensor out = stft_op(x, cfg).value();
  const Tensor direct = spec_to_tensor(tandem::signal::stft(make_wave(x.value()), cfg));
  REQUIRE(out.same_shape(direct));
  for (std::size_t i = 0; i < out.numel(); ++i)
    CHECK(out[i] == direct[i]);
}

TEST_CASE("stft_op gradient") {
  Rng rng(42);
  const StftConfig cfg = small_config();
  Variable x = Variable::leaf(random_tensor({50}, rng), true);
  const int frames = tandem::signal::stft_frame_count(50, cfg);
  const Tensor w = random_tensor({2, cfg.bins(), frames}, rng);
  CHECK(max_grad_error([&] { return project(stft_op(x, cfg), w); }, {x}) <
        2e-5);
}

TEST_CASE("istft_op forward matches the plain inverse") {
  Rng rng(43);
  const StftConfig cfg = small_config();
  const int frames = tandem::signal::stft_frame_count(50, cfg);
  Variable s = Variable::leaf(random_tensor({2, cfg.bins(), frames}, rng), true);
  const Tensor out = istft_op(s, cfg, 50).value();
  const Waveform direct =
      tandem::signal::istft(tensor_to_spec(s.value(), cfg, 50));
  REQUIRE(out.numel() == direct.samples.size());
  for (std::size_t i = 0; i < out.numel(); ++i)
    CHECK(out[i] == direct.samples[i]);
}

TEST_CASE("istft_op gradient") {
  Rng rng(44);
  const StftConfig cfg = small_config();
  const int frames = tandem::signal::stft_frame_count(50, cfg);
  Variable s = Variable::leaf(random_tensor({2, cfg.bins(), frames}, rng), true);
  const Tensor w = random_tensor({50}, rng);
  CHECK(max_grad_error([&] { return project(istft_op(s, cfg, 50), w); },
                       {s}) < 2e-5);
}

TEST_CASE("analysis-synthesis composite is the identity with unit mask") {
  Rng rng(45);
  const StftConfig cfg = small_config();
  Variable x = Variable::leaf(random_tensor({60}, rng), true);
  Variable back = istft_op(stft_op(x, cfg), cfg, 60);
  REQUIRE(back.value().numel() == 60);
  for (std::size_t i = 0; i < 60; ++i)
    CHECK(back.value()[i] == doctest::Approx(x.value()[i]).epsilon(1e-10));

  const Tensor w = random_tensor({60}, rng);
  CHECK(max_grad_error(
            [&] { return project(istft_op(stft_op(x, cfg), cfg, 60), w); },
            {x}) < 2e-5);
}

TEST_CASE("apply_mask_op scales both planes and is linear in the mask") {
  Rng rng(46);
  const StftConfig cfg = small_config();
  Tensor samples = random_tensor({70}, rng);
  const ComplexSpectrogram mix = tandem::signal::stft(make_wave(samples), cfg);

  Variable ones = Variable::leaf(Tensor({mix.bins, mix.frames}, 1.0), true);
  const Tensor kept = apply_mask_op(ones, mix).value();
  const Tensor direct = spec_to_tensor(mix);
  for (std::size_t i = 0; i < kept.numel(); ++i)
    CHECK(kept[i] == direct[i]);

  Variable mask =
      Variable::leaf(random_tensor({mix.bins, mix.frames}, rng, 0.0, 1.0), true);
  const Tensor w = random_tensor({2, mix.bins, mix.frames}, rng);
  CHECK(max_grad_error([&] { return project(apply_mask_op(mask, mix), w); },
                       {mask}) < 2e-5);
}

TEST_CASE("power_op squares the magnitude") {
  Rng rng(47);
  Variable s = Variable::leaf(random_tensor({2, 5, 4}, rng), true);
  const Tensor p = power_op(s).value();
  for (int k = 0; k < 5; ++k)
    for (int t = 0; t < 4; ++t) {
      const double re = s.value()[static_cast<std::size_t>(k) * 4 + t];
      const double im = s.value()[20 + static_cast<std::size_t>(k) * 4 + t];
      CHECK(p[static_cast<std::size_t>(k) * 4 + t] ==
            doctest::Approx(re * re + im * im).epsilon(1e-12));
    }
  const Tensor w = random_tensor({5, 4}, rng);
  CHECK(max_grad_error([&] { return project(power_op(s), w); }, {s}) < 2e-5);
}

TEST_CASE("wsdr_op value agrees with the closed-form loss") {
  Rng rng(48);
  const int len = 64;
  Waveform clean, mixture;
  clean.samples.resize(len);
  mixture.samples.resize(len);
  for (int i = 0; i < len; ++i) {
    clean.samples[static_cast<std::size_t>(i)] =
        std::sin(2.0 * M_PI * 5.0 * i / len);
    mixture.samples[static_cast<std::size_t>(i)] =
        clean.samples[static_cast<std::size_t>(i)] +
        0.4 * rng.uniform(-1.0, 1.0);
  }
  Variable x_hat = Variable::leaf(random_tensor({len}, rng), true);
  const double got = wsdr_op(x_hat, clean, mixture).value().item();
  const double want =
      tandem::signal::wsdr_loss(clean, make_wave(x_hat.value()), mixture);
  CHECK(got == want);

  // A perfect estimate reaches the minimum.
  Variable exact = Variable::leaf(
      Tensor({len}, std::vector<double>(clean.samples.begin(),
                                        clean.samples.end())));
  CHECK(wsdr_op(exact, clean, mixture).value().item() ==
        doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("wsdr_op gradient") {
  Rng rng(49);
  const int len = 48;
  Waveform clean, mixture;
  clean.samples.resize(len);
  mixture.samples.resize(len);
  for (int i = 0; i < len; ++i) {
    clean.samples[static_cast<std::size_t>(i)] = rng.uniform(-1.0, 1.0);
    mixture.samples[static_cast<std::size_t>(i)] =
        clean.samples[static_cast<std::size_t>(i)] + 0.5 * rng.uniform(-1.0, 1.0);
  }
  Variable x_hat = Variable::leaf(random_tensor({len}, rng), true);
  CHECK(max_grad_error([&] { return wsdr_op(x_hat, clean, mixture); },
                       {x_hat}) < 1e-6);
}

TEST_CASE("gradient flows through the full masking chain") {
  Rng rng(50);
  const StftConfig cfg = small_config();
  const int len = 60;
  Waveform clean, mixture;
  clean.samples.resize(len);
  mixture.samples.resize(len);
  for (int i = 0; i < len; ++i) {
    clean.samples[static_cast<std::size_t>(i)] =
        0.6 * std::sin(2.0 * M_PI * 3.0 * i / len);
    mixture.samples[static_cast<std::size_t>(i)] =
        clean.samples[static_cast<std::size_t>(i)] + 0.3 * rng.uniform(-1.0, 1.0);
  }
  const ComplexSpectrogram mix_spec = tandem::signal::stft(mixture, cfg);
  Variable mask = Variable::leaf(
      random_tensor({mix_spec.bins, mix_spec.frames}, rng, 0.1, 0.9), true);

  auto build = [&] {
    Variable masked = apply_mask_op(mask, mix_spec);
    Variable est = istft_op(masked, cfg, len);
    return wsdr_op(est, clean, mixture);
  };
  CHECK(max_grad_error(build, {mask}) < 2e-5);
}

TEST_CASE("gradient flows through the feature chain") {
  Rng rng(51);
  const StftConfig cfg = small_config();
  Variable x = Variable::leaf(random_tensor({40}, rng), true);
  const int frames = tandem::signal::stft_frame_count(40, cfg);
  const Tensor fb = random_tensor({4, cfg.bins()}, rng, 0.0, 1.0);
  const Tensor w = random_tensor({4, frames}, rng);
  auto build = [&] {
    Variable p = power_op(stft_op(x, cfg));
    Variable m = matmul_const_left(fb, p);
    return project(log_floor(m, 1e-6), w);
  };
  CHECK(max_grad_error(build, {x}) < 2e-5);
}

}  // namespace
