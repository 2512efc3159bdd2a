// core/include/tandem/signal/sdr.hpp

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

#ifndef TANDEM_SIGNAL_SDR_HPP_
#define TANDEM_SIGNAL_SDR_HPP_

#include "tandem/signal/waveform.hpp"

namespace tandem::signal {

// Negative normalized inner product, in [-1, 1]. -1 means x_hat is a
// positive rescaling of x. If exactly one vector is zero the pair is
// treated as uncorrelated and the result is 0; both zero also gives 0.
double sdr_loss(const Waveform& x, const Waveform& x_hat);

// Weighted SDR between the clean target x, the estimate x_hat, and the
// mixture y. With n = y - x and n_hat = y - x_hat:
//   alpha = |x|^2 / (|x|^2 + |n|^2)
//   loss  = alpha * sdr_loss(x, x_hat) + (1 - alpha) * sdr_loss(n, n_hat)
// Noise-free input (y = x) forces alpha = 1, dropping the noise term.
// All three inputs zero -> DegenerateInput.
double wsdr_loss(const Waveform& x, const Waveform& x_hat, const Waveform& y);

}  // namespace tandem::signal

#endif  // TANDEM_SIGNAL_SDR_HPP_
