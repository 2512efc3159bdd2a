// core/include/tandem/enhancer/unet.hpp

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

#ifndef TANDEM_ENHANCER_UNET_HPP_
#define TANDEM_ENHANCER_UNET_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tandem/nn/layers.hpp"
#include "tandem/nn/signal_ops.hpp"
#include "tandem/signal/mel.hpp"
#include "tandem/signal/snr.hpp"
#include "tandem/signal/stft.hpp"

namespace tandem::enhancer {

// Fully convolutional mask estimator over magnitude spectrograms. The time
// axis is never pooled, so any frame count passes through; the frequency
// axis is reflect-padded up to the nearest extent the pooling plan divides
// and cropped back after decoding.
struct UnetConfig {
  int depth = 4;
  int base_channels = 16;
  int channel_growth = 2;
  int freq_pool = 2;
  int time_pool = 1;  // contract: never pool time
  int kernel_size = 3;
  int convs_per_block = 2;
  std::string mask_activation = "sigmoid";
  signal::StftConfig stft;  // 512/128/512 Hann default

  // Frequency extent after reflect padding; pooling divides it exactly.
  int padded_bins() const;
  void validate() const;  // throws InvalidConfig
};

class Unet {
 public:
  Unet(const UnetConfig& cfg, std::uint64_t seed);

  const UnetConfig& config() const { return cfg_; }
  std::uint64_t seed() const { return seed_; }

  // Mask for a batch of magnitude planes [b x 1 x bins x t]; output matches
  // the input shape with entries in [0, 1]. `valid` bounds the frame count
  // per item so batch statistics ignore time padding.
  nn::Variable forward(const nn::Variable& magnitudes, bool training,
                       const std::vector<int>* valid = nullptr);

  // Single-item convenience over plain matrices; runs in eval mode.
  signal::FeatureMatrix estimate_mask(const signal::FeatureMatrix& magnitude);

  // Eq.-style enhancement: mask the noisy spectrogram, reattach the noisy
  // phase implicitly, invert. Output length equals the input length.
  signal::Waveform enhance(const signal::Waveform& noisy);

  // Differentiable estimates, one waveform Variable per mixture. Items are
  // batched through one padded forward pass and sliced back to their true
  // frame counts before inversion.
  std::vector<nn::Variable> enhance_variables(
      const std::vector<signal::Waveform>& mixtures, bool training);

  // One wSDR loss Variable per sample, computed on (clean, estimate,
  // mixture).
  std::vector<nn::Variable> ae_loss_per_sample(
      const std::vector<signal::MixtureSample>& batch, bool training);

  void collect(std::vector<nn::NamedParam>& params,
               std::vector<nn::NamedBuffer>* buffers = nullptr);
  std::size_t parameter_count();

  // Test hooks: pin every mask entry to a constant.
  void set_mask_override(double value) { mask_override_ = value; }
  void clear_mask_override() { mask_override_.reset(); }

 private:
  struct ConvUnit {
    nn::Conv2d conv;
    nn::BatchNorm bn;
  };
  struct Block {
    std::vector<ConvUnit> units;
  };

  Block make_block(int in_ch, int out_ch, tandem::Rng& rng) const;
  nn::Variable run_block(Block& block, nn::Variable x, bool training,
                         const std::vector<int>* valid);

  UnetConfig cfg_;
  std::uint64_t seed_;
  std::vector<Block> encoder_;
  Block bottleneck_;
  std::vector<Block> decoder_;  // stored outermost level first
  std::vector<nn::Conv2d> head_;
  std::optional<double> mask_override_;
};

}  // namespace tandem::enhancer

#endif  // TANDEM_ENHANCER_UNET_HPP_
