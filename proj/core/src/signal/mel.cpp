// core/src/signal/mel.cpp

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

namespace tandem::signal {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

std::vector<double> mel_filterbank(int n_mels, int bins, int fft_size,
                                   double sample_rate) {
  if (n_mels < 1) throw InvalidConfig("mel: n_mels must be >= 1");
  if (n_mels > bins) throw InvalidConfig("mel: n_mels exceeds frequency bins");

  const double mel_hi = hz_to_mel(sample_rate / 2.0);
  std::vector<double> edges(n_mels + 2);
  for (int m = 0; m < n_mels + 2; ++m)
    edges[m] = mel_to_hz(mel_hi * m / (n_mels + 1));

  std::vector<double> fb(static_cast<std::size_t>(n_mels) * bins, 0.0);
  for (int m = 0; m < n_mels; ++m) {
    const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
    for (int k = 0; k < bins; ++k) {
      const double f = sample_rate * k / fft_size;
      double v = 0.0;
      if (f > lo && f < mid)
        v = (f - lo) / (mid - lo);
      else if (f >= mid && f < hi)
        v = (hi - f) / (hi - mid);
      else if (f == mid)
        v = 1.0;
      fb[static_cast<std::size_t>(m) * bins + k] = v;
    }
  }
  return fb;
}

FeatureMatrix mel_spectrogram(const Waveform& w, int n_mels,
                              const StftConfig& cfg, bool log_scale) {
  const ComplexSpectrogram spec = stft(w, cfg);
  const std::vector<double> fb =
      mel_filterbank(n_mels, spec.bins, cfg.fft_size, w.sample_rate);

  FeatureMatrix out(n_mels, spec.frames);
  for (int t = 0; t < spec.frames; ++t) {
    for (int m = 0; m < n_mels; ++m) {
      double acc = 0.0;
      const double* row = fb.data() + static_cast<std::size_t>(m) * spec.bins;
      for (int k = 0; k < spec.bins; ++k) {
        const double p = std::norm(spec.at(k, t));
        acc += row[k] * p;
      }
      out.at(m, t) = log_scale ? std::log(acc + kLogFloor) : acc;
    }
  }
  return out;
}

std::vector<double> dct2_matrix(int n_coeffs, int n) {
  std::vector<double> d(static_cast<std::size_t>(n_coeffs) * n);
  const double s0 = std::sqrt(1.0 / n);
  const double s = std::sqrt(2.0 / n);
  for (int j = 0; j < n_coeffs; ++j) {
    for (int m = 0; m < n; ++m) {
      d[static_cast<std::size_t>(j) * n + m] =
          (j == 0 ? s0 : s) * std::cos(M_PI * j * (2 * m + 1) / (2.0 * n));
    }
  }
  return d;
}

FeatureMatrix mfcc(const Waveform& w, int n_mels, int n_coeffs,
                   const StftConfig& cfg) {
  if (n_coeffs > n_mels) throw InvalidConfig("mfcc: n_coeffs exceeds n_mels");
  const FeatureMatrix logmel = mel_spectrogram(w, n_mels, cfg, /*log_scale=*/true);
  const std::vector<double> d = dct2_matrix(n_coeffs, n_mels);

  FeatureMatrix out(n_coeffs, logmel.frames);
  for (int t = 0; t < logmel.frames; ++t) {
    for (int j = 0; j < n_coeffs; ++j) {
      double acc = 0.0;
      for (int m = 0; m < n_mels; ++m)
        acc += d[static_cast<std::size_t>(j) * n_mels + m] * logmel.at(m, t);
      out.at(j, t) = acc;
    }
  }
  return out;
}

}  // namespace tandem::signal
