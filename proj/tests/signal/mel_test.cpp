// tests/signal/mel_test.cpp

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

#include "tandem/signal/mel.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "tandem/common/error.hpp"
#include "tandem/common/rng.hpp"
#include "tandem/signal/stft.hpp"

namespace {

using tandem::Rng;
using tandem::signal::StftConfig;
using tandem::signal::Waveform;

Waveform noise_wave(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Waveform w;
  w.samples.resize(n);
  for (auto& v : w.samples) v = 0.2 * rng.normal();
  return w;
}

TEST_CASE("mel scale is monotone and inverts") {
  double prev = -1.0;
  for (double hz = 0.0; hz <= 8000.0; hz += 250.0) {
    const double mel = tandem::signal::hz_to_mel(hz);
    CHECK(mel > prev);
    prev = mel;
    CHECK(tandem::signal::mel_to_hz(mel) == doctest::Approx(hz).epsilon(1e-10));
  }
}

TEST_CASE("filterbank matches an independent construction") {
  const int n_mels = 32, bins = 257, fft_size = 512;
  const double sr = 16000.0;
  const auto fb = tandem::signal::mel_filterbank(n_mels, bins, fft_size, sr);

  // Oracle: mel-uniform edges, unit-peak triangles evaluated per bin.
  auto mel = [](double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); };
  auto hz = [](double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); };
  const double top = mel(sr / 2.0);
  for (int m = 0; m < n_mels; ++m) {
    const double lo = hz(top * m / (n_mels + 1));
    const double mid = hz(top * (m + 1) / (n_mels + 1));
    const double hi = hz(top * (m + 2) / (n_mels + 1));
    for (int k = 0; k < bins; ++k) {
      const double f = sr * k / fft_size;
      double want = 0.0;
      if (f > lo && f <= mid)
        want = (f - lo) / (mid - lo);
      else if (f > mid && f < hi)
        want = (hi - f) / (hi - mid);
      CHECK(fb[static_cast<std::size_t>(m) * bins + k] ==
            doctest::Approx(want).epsilon(1e-9));
    }
  }
}

TEST_CASE("triangles partition the covered band") {
  const int n_mels = 32, bins = 257, fft_size = 512;
  const double sr = 16000.0;
  const auto fb = tandem::signal::mel_filterbank(n_mels, bins, fft_size, sr);

  const double top = tandem::signal::hz_to_mel(sr / 2.0);
  const double first_center = tandem::signal::mel_to_hz(top * 1 / (n_mels + 1));
  const double last_center =
      tandem::signal::mel_to_hz(top * n_mels / (n_mels + 1));
  for (int k = 0; k < bins; ++k) {
    const double f = sr * k / fft_size;
    double colsum = 0.0;
    for (int m = 0; m < n_mels; ++m)
      colsum += fb[static_cast<std::size_t>(m) * bins + k];
    if (f > first_center && f < last_center)
      CHECK(colsum == doctest::Approx(1.0).epsilon(1e-9));
    else
      CHECK(colsum <= 1.0 + 1e-9);
  }
  for (int m = 0; m < n_mels; ++m) {
    double rowsum = 0.0;
    double rowmax = 0.0;
    for (int k = 0; k < bins; ++k) {
      rowsum += fb[static_cast<std::size_t>(m) * bins + k];
      rowmax = std::max(rowmax, fb[static_cast<std::size_t>(m) * bins + k]);
    }
    CHECK(rowsum > 0.0);
    CHECK(rowmax <= 1.0 + 1e-12);
  }
}

TEST_CASE("zero waveform gives a zero linear-mel matrix") {
  Waveform w;
  w.samples.assign(8000, 0.0);
  const auto m =
      tandem::signal::mel_spectrogram(w, 32, StftConfig{}, /*log_scale=*/false);
  CHECK(m.rows == 32);
  for (double v : m.values) CHECK(v == 0.0);
}

TEST_CASE("mel energies track spectral energies through the coverage") {
  StftConfig cfg;
  const Waveform w = noise_wave(6000, 5);
  const auto spec = tandem::signal::stft(w, cfg);
  const int n_mels = 40;
  const auto fb =
      tandem::signal::mel_filterbank(n_mels, spec.bins, cfg.fft_size, 16000.0);
  const auto m = tandem::signal::mel_spectrogram(w, n_mels, cfg, false);
  REQUIRE(m.frames == spec.frames);

  // Independent summation: total mel energy equals coverage-weighted
  // spectral energy, with coverage from the directly constructed bank.
  for (int t = 0; t < spec.frames; ++t) {
    double mel_total = 0.0;
    for (int r = 0; r < n_mels; ++r) mel_total += m.at(r, t);
    double want = 0.0;
    for (int k = 0; k < spec.bins; ++k) {
      double cov = 0.0;
      for (int r = 0; r < n_mels; ++r)
        cov += fb[static_cast<std::size_t>(r) * spec.bins + k];
      want += cov * std::norm(spec.at(k, t));
    }
    CHECK(mel_total == doctest::Approx(want).epsilon(1e-6));
  }
}

TEST_CASE("log-mel uses the documented floor") {
  Waveform w;
  w.samples.assign(4000, 0.0);
  const auto m = tandem::signal::mel_spectrogram(w, 16, StftConfig{}, true);
  for (double v : m.values)
    CHECK(v == doctest::Approx(std::log(tandem::signal::kLogFloor)));
}

TEST_CASE("dct matrix is orthonormal and matches brute force") {
  const int n = 24;
  const auto d = tandem::signal::dct2_matrix(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double dot = 0.0;
      for (int m = 0; m < n; ++m)
        dot += d[static_cast<std::size_t>(a) * n + m] *
               d[static_cast<std::size_t>(b) * n + m];
      CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-9));
    }
  }

  Rng rng(9);
  std::vector<double> x(n);
  for (auto& v : x) v = rng.normal();
  for (int j = 0; j < n; ++j) {
    double got = 0.0;
    for (int m = 0; m < n; ++m)
      got += d[static_cast<std::size_t>(j) * n + m] * x[m];
    const double scale = j == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    double want = 0.0;
    for (int m = 0; m < n; ++m)
      want += scale * x[m] *
              std::cos(std::numbers::pi * j * (2 * m + 1) / (2.0 * n));
    CHECK(got == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("constant band vector transforms to a pure zeroth coefficient") {
  const int n = 32;
  const auto d = tandem::signal::dct2_matrix(n, n);
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int m = 0; m < n; ++m)
      acc += d[static_cast<std::size_t>(j) * n + m] * 3.7;
    if (j == 0)
      CHECK(acc == doctest::Approx(3.7 * std::sqrt(static_cast<double>(n))));
    else
      CHECK(std::abs(acc) < 1e-9);
  }
}

TEST_CASE("mfcc equals the dct of the log-mel, frame by frame") {
  StftConfig cfg;
  cfg.window_length = 320;
  cfg.hop_length = 160;
  cfg.fft_size = 512;
  const Waveform w = noise_wave(5000, 13);
  const int n_mels = 40, n_coeffs = 13;
  const auto logmel = tandem::signal::mel_spectrogram(w, n_mels, cfg, true);
  const auto c = tandem::signal::mfcc(w, n_mels, n_coeffs, cfg);
  REQUIRE(c.rows == n_coeffs);
  REQUIRE(c.frames == logmel.frames);

  for (int t = 0; t < c.frames; ++t) {
    for (int j = 0; j < n_coeffs; ++j) {
      const double scale =
          j == 0 ? std::sqrt(1.0 / n_mels) : std::sqrt(2.0 / n_mels);
      double want = 0.0;
      for (int m = 0; m < n_mels; ++m)
        want += scale * logmel.at(m, t) *
                std::cos(std::numbers::pi * j * (2 * m + 1) / (2.0 * n_mels));
      CHECK(c.at(j, t) == doctest::Approx(want).epsilon(1e-9));
    }
  }
}

TEST_CASE("zero waveform mfcc frames are identical with coefficient 0 dominant") {
  Waveform w;
  w.samples.assign(4000, 0.0);
  const auto c = tandem::signal::mfcc(w, 32, 13, StftConfig{});
  for (int t = 1; t < c.frames; ++t)
    for (int j = 0; j < c.rows; ++j) CHECK(c.at(j, t) == c.at(j, 0));
  for (int j = 1; j < c.rows; ++j)
    CHECK(std::abs(c.at(j, 0)) < std::abs(c.at(0, 0)));
}

TEST_CASE("configuration errors") {
  Waveform w = noise_wave(2000, 1);
  CHECK_THROWS_AS(tandem::signal::mel_spectrogram(w, 300, StftConfig{}, false),
                  tandem::InvalidConfig);
  CHECK_THROWS_AS(tandem::signal::mel_spectrogram(w, 0, StftConfig{}, false),
                  tandem::InvalidConfig);
  CHECK_THROWS_AS(tandem::signal::mfcc(w, 13, 20, StftConfig{}),
                  tandem::InvalidConfig);
}

}  // namespace
