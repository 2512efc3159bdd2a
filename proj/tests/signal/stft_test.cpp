// tests/signal/stft_test.cpp

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

#include "tandem/signal/stft.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "tandem/common/error.hpp"
#include "tandem/common/rng.hpp"

namespace {

using tandem::Rng;
using tandem::signal::ComplexSpectrogram;
using tandem::signal::StftConfig;
using tandem::signal::Waveform;
using tandem::signal::Window;

Waveform random_wave(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Waveform w;
  w.samples.resize(n);
  for (auto& v : w.samples) v = 0.3 * rng.normal();
  return w;
}

// Frame extraction duplicated here so the transform is checked against an
// independent statement of the centering convention.
std::vector<double> oracle_frame(const Waveform& w, const StftConfig& cfg,
                                 int t) {
  const std::vector<double> win = cfg.make_window();
  std::vector<double> frame(cfg.window_length, 0.0);
  const std::int64_t start =
      static_cast<std::int64_t>(t) * cfg.hop_length - cfg.pad();
  for (int j = 0; j < cfg.window_length; ++j) {
    const std::int64_t idx = start + j;
    if (idx >= 0 && idx < static_cast<std::int64_t>(w.size()))
      frame[j] = w.samples[static_cast<std::size_t>(idx)] * win[j];
  }
  return frame;
}

TEST_CASE("zero waveform gives zero spectrogram") {
  Waveform w;
  w.samples.assign(16000, 0.0);
  const auto spec = tandem::signal::stft(w, StftConfig{});
  CHECK(spec.bins == 257);
  CHECK(spec.original_length == 16000);
  for (const auto& v : spec.values) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("frames match a direct DFT of the centered frames") {
  StftConfig cfg;
  cfg.window_length = 64;
  cfg.hop_length = 16;
  cfg.fft_size = 64;
  const Waveform w = random_wave(500, 11);
  const auto spec = tandem::signal::stft(w, cfg);

  for (int t = 0; t < spec.frames; t += 3) {
    const std::vector<double> frame = oracle_frame(w, cfg, t);
    for (int k = 0; k < spec.bins; ++k) {
      std::complex<double> acc = 0.0;
      for (int j = 0; j < cfg.fft_size; ++j) {
        const double x = j < cfg.window_length ? frame[j] : 0.0;
        const double ang = -2.0 * std::numbers::pi * k * j / cfg.fft_size;
        acc += x * std::complex<double>(std::cos(ang), std::sin(ang));
      }
      CHECK(std::abs(spec.at(k, t) - acc) < 1e-9);
    }
  }
}

TEST_CASE("bin-centered sinusoid concentrates under rectangular framing") {
  StftConfig cfg;
  cfg.window_length = 128;
  cfg.hop_length = 64;
  cfg.fft_size = 128;
  cfg.window = Window::kRect;
  Waveform w;
  w.samples.resize(1280);
  const int bin = 8;  // 8 cycles per 128-sample frame
  for (std::size_t i = 0; i < w.size(); ++i)
    w.samples[i] =
        std::cos(2.0 * std::numbers::pi * bin * static_cast<double>(i) / 128.0);
  const auto spec = tandem::signal::stft(w, cfg);

  // Interior frames see a full-strength sinusoid; edge frames are padded.
  for (int t = 2; t < spec.frames - 2; ++t) {
    const double peak = std::abs(spec.at(bin, t));
    CHECK(peak == doctest::Approx(64.0).epsilon(1e-9));
    for (int k = 0; k < spec.bins; ++k) {
      if (k == bin) continue;
      CHECK(std::abs(spec.at(k, t)) < 1e-8);
    }
  }
}

TEST_CASE("Parseval holds per frame") {
  StftConfig cfg;  // default 512/128/512 Hann
  const Waveform w = random_wave(4000, 23);
  const auto spec = tandem::signal::stft(w, cfg);

  for (int t = 0; t < spec.frames; ++t) {
    const std::vector<double> frame = oracle_frame(w, cfg, t);
    double time_energy = 0.0;
    for (double v : frame) time_energy += v * v;

    double freq_energy = std::norm(spec.at(0, t));
    freq_energy += std::norm(spec.at(spec.bins - 1, t));
    for (int k = 1; k < spec.bins - 1; ++k)
      freq_energy += 2.0 * std::norm(spec.at(k, t));
    freq_energy /= cfg.fft_size;

    if (time_energy > 1e-12)
      CHECK(freq_energy ==
            doctest::Approx(time_energy).epsilon(1e-6));
  }
}

TEST_CASE("istft(stft(w)) reconstructs w under COLA-valid configs") {
  struct Case {
    int window, hop, fft;
    Window win;
  };
  const Case cases[] = {
      {512, 128, 512, Window::kHann},   // enhancer default
      {320, 160, 512, Window::kHann},   // 20 ms / 10 ms feature config
      {1024, 256, 1024, Window::kHann}, // 64 ms / 16 ms scene config
      {256, 64, 256, Window::kHamming},
      {128, 128, 128, Window::kRect},
  };
  for (const auto& c : cases) {
    StftConfig cfg;
    cfg.window_length = c.window;
    cfg.hop_length = c.hop;
    cfg.fft_size = c.fft;
    cfg.window = c.win;
    for (std::size_t len : {1000u, 4096u, 16000u}) {
      const Waveform w = random_wave(len, 31 + len);
      const Waveform back = tandem::signal::istft(tandem::signal::stft(w, cfg));
      REQUIRE(back.size() == w.size());
      double max_err = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i)
        max_err = std::max(max_err, std::abs(back.samples[i] - w.samples[i]));
      CHECK(max_err <= 1e-6);
    }
  }
}

TEST_CASE("all-zero spectrogram inverts to silence") {
  const Waveform w = random_wave(3000, 51);
  auto spec = tandem::signal::stft(w, StftConfig{});
  for (auto& v : spec.values) v = 0.0;
  const Waveform out = tandem::signal::istft(spec);
  REQUIRE(out.size() == 3000);
  for (double v : out.samples) CHECK(v == 0.0);
}

TEST_CASE("identity mask reproduces the plain round trip") {
  const Waveform w = random_wave(5000, 77);
  auto spec = tandem::signal::stft(w, StftConfig{});
  auto masked = spec;
  for (auto& v : masked.values) v *= 1.0;
  const Waveform a = tandem::signal::istft(spec);
  const Waveform b = tandem::signal::istft(masked);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a.samples[i] == b.samples[i]);
}

TEST_CASE("frame count is the minimal full cover of the padded extent") {
  StftConfig cfg;
  for (std::int64_t len : {1, 100, 511, 512, 513, 16000}) {
    const int frames = tandem::signal::stft_frame_count(len, cfg);
    const std::int64_t padded = len + 2 * cfg.pad();
    CHECK(static_cast<std::int64_t>(frames - 1) * cfg.hop_length +
              cfg.window_length >= padded);
    if (frames > 1)
      CHECK(static_cast<std::int64_t>(frames - 2) * cfg.hop_length +
                cfg.window_length < padded);
    Waveform w;
    w.samples.assign(static_cast<std::size_t>(len), 0.5);
    CHECK(tandem::signal::stft(w, cfg).frames == frames);
  }
}

TEST_CASE("invalid inputs and configs are rejected") {
  CHECK_THROWS_AS(tandem::signal::stft(Waveform{}, StftConfig{}),
                  tandem::InvalidSignal);

  Waveform bad;
  bad.samples = {0.0, std::nan(""), 0.0};
  CHECK_THROWS_AS(tandem::signal::stft(bad, StftConfig{}),
                  tandem::InvalidSignal);

  StftConfig hop_too_big;
  hop_too_big.hop_length = 600;
  CHECK_THROWS_AS(hop_too_big.validate(), tandem::InvalidConfig);

  StftConfig window_over_fft;
  window_over_fft.window_length = 600;
  window_over_fft.fft_size = 512;
  CHECK_THROWS_AS(window_over_fft.validate(), tandem::InvalidConfig);

  StftConfig non_pow2;
  non_pow2.window_length = 300;
  non_pow2.fft_size = 300;
  CHECK_THROWS_AS(non_pow2.validate(), tandem::InvalidConfig);

  // Periodic Hann with hop = window zeroes the first overlap-add slot, so
  // the pair is not invertible.
  StftConfig hann_no_overlap;
  hann_no_overlap.window_length = 512;
  hann_no_overlap.hop_length = 512;
  hann_no_overlap.fft_size = 512;
  CHECK_THROWS_AS(hann_no_overlap.validate(), tandem::InvalidConfig);

  const Waveform w = random_wave(1000, 3);
  auto spec = tandem::signal::stft(w, StftConfig{});
  spec.bins -= 1;
  CHECK_THROWS_AS(tandem::signal::istft(spec), tandem::InvalidConfig);
}

}  // namespace
