// core/include/tandem/nn/signal_ops.hpp

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

#ifndef TANDEM_NN_SIGNAL_OPS_HPP_
#define TANDEM_NN_SIGNAL_OPS_HPP_

#include <cstdint>

#include "tandem/nn/variable.hpp"
#include "tandem/signal/stft.hpp"

namespace tandem::nn {

// Spectrogram tensors use the layout [2 x bins x frames]: plane 0 holds the
// real parts, plane 1 the imaginary parts, each plane row-major [bins x
// frames].
Tensor spec_to_tensor(const signal::ComplexSpectrogram& spec);
signal::ComplexSpectrogram tensor_to_spec(const Tensor& t,
                                          const signal::StftConfig& cfg,
                                          std::int64_t original_length);

// x: [l] samples -> [2 x bins x frames].
Variable stft_op(const Variable& x, const signal::StftConfig& cfg);

// s: [2 x bins x frames] -> [original_length] via weighted overlap-add.
Variable istft_op(const Variable& s, const signal::StftConfig& cfg,
                  std::int64_t original_length);

// mask: [bins x frames], mixture: gradient constant. Output [2 x bins x
// frames] scales both mixture planes pointwise by the mask.
Variable apply_mask_op(const Variable& mask,
                       const signal::ComplexSpectrogram& mixture);

// s: [2 x bins x frames] -> [bins x frames], re^2 + im^2 per cell.
Variable power_op(const Variable& s);

// Scalar weighted SDR of the estimate against constant clean and mixture
// signals; the value matches the closed-form loss and the gradient is
// analytic in the estimate.
Variable wsdr_op(const Variable& x_hat, const signal::Waveform& clean,
                 const signal::Waveform& mixture);

}  // namespace tandem::nn

#endif  // TANDEM_NN_SIGNAL_OPS_HPP_
