// core/include/tandem/signal/resample.hpp

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

#ifndef TANDEM_SIGNAL_RESAMPLE_HPP_
#define TANDEM_SIGNAL_RESAMPLE_HPP_

#include "tandem/signal/waveform.hpp"

namespace tandem::signal {

// Windowed-sinc resampling to an arbitrary target rate. Output length is
// round(in_len * out_rate / in_rate). The anti-aliasing cutoff tracks the
// lower of the two Nyquist frequencies, so downsampling is band-limited.
Waveform resample(const Waveform& in, int out_rate);

// Convenience wrapper targeting the internal 16 kHz rate. Inputs already at
// 16 kHz pass through untouched.
Waveform resample_to_internal(const Waveform& in);

}  // namespace tandem::signal

#endif  // TANDEM_SIGNAL_RESAMPLE_HPP_
