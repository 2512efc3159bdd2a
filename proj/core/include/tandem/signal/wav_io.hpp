// core/include/tandem/signal/wav_io.hpp

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

#ifndef TANDEM_SIGNAL_WAV_IO_HPP_
#define TANDEM_SIGNAL_WAV_IO_HPP_

#include <string>

#include "tandem/signal/waveform.hpp"

namespace tandem::signal {

// Reads a 16-bit PCM RIFF/WAVE file. Stereo is averaged to mono; the native
// sample rate is kept (callers resample). Malformed headers, non-PCM codecs,
// or widths other than 16 bit throw DataError.
Waveform read_wav(const std::string& path);

// As read_wav, then resampled to the internal 16 kHz rate.
Waveform read_wav_as_internal(const std::string& path);

// Writes mono 16-bit PCM. Samples are clamped to [-1, 1] at export; this is
// the only place amplitudes are clipped. I/O failure throws DataError.
void write_wav(const std::string& path, const Waveform& w);

}  // namespace tandem::signal

#endif  // TANDEM_SIGNAL_WAV_IO_HPP_
