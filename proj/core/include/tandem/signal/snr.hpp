// core/include/tandem/signal/snr.hpp

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

#ifndef TANDEM_SIGNAL_SNR_HPP
#define TANDEM_SIGNAL_SNR_HPP

#include <cstdint>
#include <string>

#include "tandem/signal/waveform.hpp"

namespace tandem::signal {

// Class index or transcript, depending on the task.
struct Label {
  int cls = -1;
  std::string transcript;
};

// One training/evaluation item: mixture = clean + noise holds elementwise
// (no clipping is applied before WAV export).
struct MixtureSample {
  Waveform clean;
  Waveform noise;  // already scaled by noise_gain
  Waveform mixture;
  double snr_db = 0.0;
  double noise_gain = 1.0;
  Label label;
};

// 10 log10 of the energy ratio. Throws DegenerateInput on zero-energy noise.
double measure_snr(const Waveform& sig, const Waveform& noise);

// Aligns noise to clean's length (circular gather starting at `offset`),
// scales it so that measure_snr(clean, scaled) == snr_db, and mixes.
MixtureSample mix_at_snr(const Waveform& clean, const Waveform& noise,
                         double snr_db, std::uint64_t offset = 0);

}  // namespace tandem::signal

#endif  // TANDEM_SIGNAL_SNR_HPP
