// core/include/tandem/signal/stft.hpp

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

#ifndef TANDEM_SIGNAL_STFT_HPP
#define TANDEM_SIGNAL_STFT_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "tandem/signal/waveform.hpp"

namespace tandem::signal {

enum class Window { kHann, kHamming, kRect };

// Analysis/synthesis configuration. Frames are centered: the signal is padded
// with window_length/2 zeros on both sides, so every original sample is
// covered by a full set of overlapping windows and the inverse transform is
// exact everywhere inside the original extent.
struct StftConfig {
  int window_length = 512;
  int hop_length = 128;
  int fft_size = 512;
  Window window = Window::kHann;

  int bins() const { return fft_size / 2 + 1; }
  int pad() const { return window_length / 2; }

  // Throws InvalidConfig unless hop <= window <= fft, fft is a power of two,
  // and the (window, hop) pair is invertible (nonvanishing squared-window
  // overlap-add).
  void validate() const;

  std::vector<double> make_window() const;

  bool operator==(const StftConfig&) const = default;
};

// Complex half-spectrum series, frame-major: values[t * bins + k] holds bin k
// of frame t. original_length records the pre-padding sample count so the
// inverse transform can truncate.
struct ComplexSpectrogram {
  std::vector<std::complex<double>> values;
  StftConfig config;
  int bins = 0;
  int frames = 0;
  std::int64_t original_length = 0;

  std::complex<double>& at(int k, int t) { return values[static_cast<std::size_t>(t) * bins + k]; }
  const std::complex<double>& at(int k, int t) const {
    return values[static_cast<std::size_t>(t) * bins + k];
  }
};

// Frame count produced for a signal of the given length under this config.
int stft_frame_count(std::int64_t length, const StftConfig& cfg);

ComplexSpectrogram stft(const Waveform& w, const StftConfig& cfg);

// Weighted overlap-add inverse. Output length equals original_length.
Waveform istft(const ComplexSpectrogram& spec);

}  // namespace tandem::signal

#endif  // TANDEM_SIGNAL_STFT_HPP
