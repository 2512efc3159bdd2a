// core/src/signal/sdr.cpp

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

#include "tandem/signal/sdr.hpp"

#include <algorithm>
#include <cmath>

#include "tandem/common/error.hpp"

namespace tandem::signal {

double sdr_loss(const Waveform& x, const Waveform& x_hat) {
  if (x.size() != x_hat.size()) throw InvalidInput("sdr_loss: length mismatch");
  const double ex = x.energy();
  const double eh = x_hat.energy();
  if (ex <= 0.0 || eh <= 0.0) return 0.0;
  double dot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    dot += x.samples[i] * x_hat.samples[i];
  // Cauchy-Schwarz bounds the ratio by 1; the clamp only absorbs roundoff.
  return std::clamp(-dot / (std::sqrt(ex) * std::sqrt(eh)), -1.0, 1.0);
}

double wsdr_loss(const Waveform& x, const Waveform& x_hat, const Waveform& y) {
  if (x.size() != x_hat.size() || x.size() != y.size())
    throw InvalidInput("wsdr_loss: length mismatch");
  if (x.energy() <= 0.0 && x_hat.energy() <= 0.0 && y.energy() <= 0.0)
    throw DegenerateInput("wsdr_loss: all inputs zero");

  Waveform n;
  n.samples.resize(y.size());
  Waveform n_hat;
  n_hat.samples.resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    n.samples[i] = y.samples[i] - x.samples[i];
    n_hat.samples[i] = y.samples[i] - x_hat.samples[i];
  }

  const double ex = x.energy();
  const double en = n.energy();
  // ex + en = 0 means x = y = 0; both SDR terms are then 0 by the
  // zero-vector convention, so the weighting is irrelevant.
  if (ex + en <= 0.0) return 0.0;
  const double alpha = ex / (ex + en);
  return alpha * sdr_loss(x, x_hat) + (1.0 - alpha) * sdr_loss(n, n_hat);
}

}  // namespace tandem::signal
