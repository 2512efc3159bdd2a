// core/src/signal/snr.cpp

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

#include "tandem/signal/snr.hpp"

#include <cmath>

namespace tandem::signal {

double measure_snr(const Waveform& sig, const Waveform& noise) {
  if (sig.size() != noise.size())
    throw InvalidInput("measure_snr: length mismatch");
  const double es = sig.energy();
  const double en = noise.energy();
  if (en <= 0.0) throw DegenerateInput("measure_snr: zero-energy noise");
  return 10.0 * std::log10(es / en);
}

MixtureSample mix_at_snr(const Waveform& clean, const Waveform& noise,
                         double snr_db, std::uint64_t offset) {
  check_finite(clean, "mix_at_snr clean");
  check_finite(noise, "mix_at_snr noise");
  if (clean.energy() <= 0.0)
    throw DegenerateInput("mix_at_snr: silent clean signal");

  // Shorter noise loops circularly; longer noise becomes a contiguous crop
  // when offset + length fits, a wrapped crop otherwise.
  const std::size_t n = clean.size();
  Waveform aligned;
  aligned.samples.resize(n);
  aligned.source_id = noise.source_id;
  const std::size_t m = noise.size();
  for (std::size_t i = 0; i < n; ++i)
    aligned.samples[i] = noise.samples[(offset + i) % m];

  const double en = aligned.energy();
  if (en <= 0.0) throw DegenerateInput("mix_at_snr: silent noise segment");

  const double gain =
      std::sqrt(clean.energy() / (en * std::pow(10.0, snr_db / 10.0)));

  MixtureSample out;
  out.clean = clean;
  out.noise = std::move(aligned);
  for (double& v : out.noise.samples) v *= gain;
  out.mixture.samples.resize(n);
  out.mixture.source_id = clean.source_id;
  for (std::size_t i = 0; i < n; ++i)
    out.mixture.samples[i] = clean.samples[i] + out.noise.samples[i];
  out.snr_db = snr_db;
  out.noise_gain = gain;
  return out;
}

}  // namespace tandem::signal
