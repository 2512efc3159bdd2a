// core/include/tandem/signal/waveform.hpp

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

#ifndef TANDEM_SIGNAL_WAVEFORM_HPP
#define TANDEM_SIGNAL_WAVEFORM_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "tandem/common/error.hpp"

namespace tandem::signal {

inline constexpr int kSampleRate = 16000;  // everything internal runs at 16 kHz

// Mono sample sequence, nominally in [-1, 1]. All internal processing assumes
// 16 kHz; ingestion resamples before a Waveform is built.
struct Waveform {
  std::vector<double> samples;
  int sample_rate = kSampleRate;
  std::string source_id;

  Waveform() = default;
  Waveform(std::vector<double> s, std::string id = "")
      : samples(std::move(s)), source_id(std::move(id)) {}

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }

  double energy() const {
    double e = 0.0;
    for (double v : samples) e += v * v;
    return e;
  }

  double rms() const {
    return samples.empty() ? 0.0 : std::sqrt(energy() / samples.size());
  }
};

inline void check_finite(const Waveform& w, const std::string& what) {
  if (w.empty()) throw InvalidSignal(what + ": empty waveform");
  for (double v : w.samples) {
    if (!std::isfinite(v)) throw InvalidSignal(what + ": non-finite sample");
  }
}

}  // namespace tandem::signal

#endif  // TANDEM_SIGNAL_WAVEFORM_HPP
