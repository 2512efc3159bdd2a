// core/include/tandem/signal/mel.hpp

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

#ifndef TANDEM_SIGNAL_MEL_HPP
#define TANDEM_SIGNAL_MEL_HPP

#include <vector>

#include "tandem/signal/stft.hpp"
#include "tandem/signal/waveform.hpp"

namespace tandem::signal {

// Floor added before taking logs of mel energies.
inline constexpr double kLogFloor = 1e-10;

// Row-major [rows x frames] feature block.
struct FeatureMatrix {
  std::vector<double> values;
  int rows = 0;
  int frames = 0;

  FeatureMatrix() = default;
  FeatureMatrix(int r, int f) : values(static_cast<std::size_t>(r) * f, 0.0), rows(r), frames(f) {}

  double& at(int r, int t) { return values[static_cast<std::size_t>(r) * frames + t]; }
  double at(int r, int t) const { return values[static_cast<std::size_t>(r) * frames + t]; }
};

double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Triangular filterbank, row-major [n_mels x bins], unit-peak triangles whose
// up/down slopes of neighbouring filters sum to one between the first and
// last centre frequencies.
std::vector<double> mel_filterbank(int n_mels, int bins, int fft_size,
                                   double sample_rate);

// Mel (optionally log-mel) energies of the power spectrum.
FeatureMatrix mel_spectrogram(const Waveform& w, int n_mels,
                              const StftConfig& cfg, bool log_scale);

// Orthonormal DCT-II matrix, row-major [n_coeffs x n].
std::vector<double> dct2_matrix(int n_coeffs, int n);

// DCT-II of the log-mel spectrogram, per frame.
FeatureMatrix mfcc(const Waveform& w, int n_mels, int n_coeffs,
                   const StftConfig& cfg);

}  // namespace tandem::signal

#endif  // TANDEM_SIGNAL_MEL_HPP
