// core/src/signal/stft.cpp

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

#include <algorithm>
#include <cmath>

#include "tandem/signal/fft.hpp"

namespace tandem::signal {

void StftConfig::validate() const {
  if (window_length < 1 || hop_length < 1)
    throw InvalidConfig("stft: window and hop must be positive");
  if (hop_length > window_length)
    throw InvalidConfig("stft: hop must not exceed window length");
  if (window_length > fft_size)
    throw InvalidConfig("stft: window must not exceed fft size");
  if (!Fft::is_power_of_two(static_cast<std::size_t>(fft_size)))
    throw InvalidConfig("stft: fft size must be a power of two");
  // Nonvanishing squared-window overlap-add over one hop period; this is what
  // makes the weighted overlap-add inverse exact.
  const std::vector<double> w = make_window();
  for (int t = 0; t < hop_length; ++t) {
    double den = 0.0;
    for (int j = t; j < window_length; j += hop_length) den += w[j] * w[j];
    if (den < 1e-8)
      throw InvalidConfig("stft: (window, hop) pair is not invertible");
  }
}

std::vector<double> StftConfig::make_window() const {
  std::vector<double> w(window_length);
  const double n = static_cast<double>(window_length);  // periodic variants
  for (int i = 0; i < window_length; ++i) {
    const double phase = 2.0 * M_PI * i / n;
    switch (window) {
      case Window::kHann:
        w[i] = 0.5 - 0.5 * std::cos(phase);
        break;
      case Window::kHamming:
        w[i] = 0.54 - 0.46 * std::cos(phase);
        break;
      case Window::kRect:
        w[i] = 1.0;
        break;
    }
  }
  return w;
}

int stft_frame_count(std::int64_t length, const StftConfig& cfg) {
  const std::int64_t padded = length + 2 * cfg.pad();
  if (padded <= cfg.window_length) return 1;
  const std::int64_t span = padded - cfg.window_length;
  return static_cast<int>(1 + (span + cfg.hop_length - 1) / cfg.hop_length);
}

ComplexSpectrogram stft(const Waveform& w, const StftConfig& cfg) {
  cfg.validate();
  check_finite(w, "stft");

  const int bins = cfg.bins();
  const int frames = stft_frame_count(static_cast<std::int64_t>(w.size()), cfg);
  const std::vector<double> win = cfg.make_window();
  const Fft fft(static_cast<std::size_t>(cfg.fft_size));

  ComplexSpectrogram spec;
  spec.config = cfg;
  spec.bins = bins;
  spec.frames = frames;
  spec.original_length = static_cast<std::int64_t>(w.size());
  spec.values.assign(static_cast<std::size_t>(bins) * frames, {0.0, 0.0});

  std::vector<std::complex<double>> buf(cfg.fft_size);
  const std::int64_t pad = cfg.pad();
  const std::int64_t n = static_cast<std::int64_t>(w.size());
  for (int t = 0; t < frames; ++t) {
    const std::int64_t start = static_cast<std::int64_t>(t) * cfg.hop_length - pad;
    for (int j = 0; j < cfg.fft_size; ++j) {
      double v = 0.0;
      if (j < cfg.window_length) {
        const std::int64_t idx = start + j;
        if (idx >= 0 && idx < n) v = w.samples[idx] * win[j];
      }
      buf[j] = {v, 0.0};
    }
    fft.forward(buf.data());
    for (int k = 0; k < bins; ++k) spec.at(k, t) = buf[k];
  }
  return spec;
}

Waveform istft(const ComplexSpectrogram& spec) {
  const StftConfig& cfg = spec.config;
  cfg.validate();
  if (spec.bins != cfg.bins())
    throw InvalidConfig("istft: bin count does not match config");
  if (spec.values.size() != static_cast<std::size_t>(spec.bins) * spec.frames)
    throw InvalidConfig("istft: value buffer does not match declared shape");

  const std::vector<double> win = cfg.make_window();
  const Fft fft(static_cast<std::size_t>(cfg.fft_size));
  const int n = cfg.fft_size;
  const int half = n / 2;

  const std::int64_t synth_len =
      static_cast<std::int64_t>(spec.frames - 1) * cfg.hop_length + cfg.window_length;
  std::vector<double> num(synth_len, 0.0);
  std::vector<double> den(synth_len, 0.0);

  std::vector<std::complex<double>> buf(n);
  for (int t = 0; t < spec.frames; ++t) {
    buf[0] = spec.at(0, t);
    buf[half] = spec.at(half, t);
    for (int k = 1; k < half; ++k) {
      buf[k] = spec.at(k, t);
      buf[n - k] = std::conj(spec.at(k, t));
    }
    fft.inverse(buf.data());
    const std::int64_t off = static_cast<std::int64_t>(t) * cfg.hop_length;
    for (int j = 0; j < cfg.window_length; ++j) {
      num[off + j] += win[j] * buf[j].real();
      den[off + j] += win[j] * win[j];
    }
  }

  Waveform out;
  out.samples.resize(static_cast<std::size_t>(spec.original_length));
  const std::int64_t pad = cfg.pad();
  for (std::int64_t i = 0; i < spec.original_length; ++i) {
    const std::int64_t j = i + pad;
    const double d = (j < synth_len) ? den[j] : 0.0;
    out.samples[i] = d > 1e-12 ? num[j] / d : 0.0;
  }
  return out;
}

}  // namespace tandem::signal
