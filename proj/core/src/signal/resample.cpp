// core/src/signal/resample.cpp

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

#include "tandem/signal/resample.hpp"

#include <cmath>
#include <numbers>

#include "tandem/common/error.hpp"

namespace tandem::signal {
namespace {

constexpr int kSincZeroCrossings = 16;

double sinc(double u) {
  if (std::abs(u) < 1e-12) return 1.0;
  const double pu = std::numbers::pi * u;
  return std::sin(pu) / pu;
}

}  // namespace

Waveform resample(const Waveform& in, int out_rate) {
  if (out_rate < 1 || in.sample_rate < 1)
    throw InvalidConfig("resample: sample rates must be positive");
  Waveform out;
  out.sample_rate = out_rate;
  out.source_id = in.source_id;
  if (in.empty()) return out;
  if (out_rate == in.sample_rate) {
    out.samples = in.samples;
    return out;
  }
  check_finite(in, "resample input");

  const double ratio = static_cast<double>(out_rate) / in.sample_rate;
  // Cutoff relative to the input Nyquist; < 1 only when downsampling.
  const double scale = std::min(1.0, ratio);
  const int half_width =
      static_cast<int>(std::ceil(kSincZeroCrossings / scale));
  const auto n = static_cast<std::int64_t>(in.size());
  const auto out_len =
      static_cast<std::size_t>(std::llround(static_cast<double>(in.size()) *
                                            out_rate / in.sample_rate));
  out.samples.resize(out_len);

  for (std::size_t i = 0; i < out_len; ++i) {
    const double t = static_cast<double>(i) / ratio;
    const auto center = static_cast<std::int64_t>(std::floor(t));
    double acc = 0.0;
    double weight = 0.0;
    for (std::int64_t j = center - half_width + 1; j <= center + half_width;
         ++j) {
      const double u = t - static_cast<double>(j);
      // Hann-windowed sinc; the window argument spans [-1, 1] over the taps.
      const double w =
          scale * sinc(scale * u) *
          0.5 * (1.0 + std::cos(std::numbers::pi * u / half_width));
      weight += w;
      if (j >= 0 && j < n)
        acc += in.samples[static_cast<std::size_t>(j)] * w;
    }
    // Normalizing by the full kernel sum makes DC gain exact and keeps
    // integer-aligned taps an identity.
    out.samples[i] = weight > 0.0 ? acc / weight : 0.0;
  }
  return out;
}

Waveform resample_to_internal(const Waveform& in) {
  return resample(in, kSampleRate);
}

}  // namespace tandem::signal
