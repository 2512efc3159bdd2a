// core/src/enhancer/unet.cpp

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

#include "tandem/enhancer/unet.hpp"

#include <algorithm>
#include <cmath>

#include "tandem/common/error.hpp"
#include "tandem/nn/ops.hpp"

namespace tandem::enhancer {

namespace nn = tandem::nn;
using signal::ComplexSpectrogram;
using signal::FeatureMatrix;
using signal::Waveform;

int UnetConfig::padded_bins() const {
  int plan = 1;
  for (int l = 0; l < depth; ++l) plan *= freq_pool;
  const int f = stft.bins();
  return ((f + plan - 1) / plan) * plan;
}

void UnetConfig::validate() const {
  if (depth < 1) throw InvalidConfig("unet: depth must be at least 1");
  if (base_channels < 1 || channel_growth < 1)
    throw InvalidConfig("unet: channel plan must be positive");
  if (time_pool != 1)
    throw InvalidConfig("unet: time axis is never pooled (time_pool = 1)");
  if (freq_pool != 1 && freq_pool != 2)
    throw InvalidConfig("unet: frequency pooling factor must be 1 or 2");
  if (kernel_size < 1 || kernel_size % 2 == 0)
    throw InvalidConfig("unet: kernel size must be odd");
  if (convs_per_block < 1)
    throw InvalidConfig("unet: at least one conv per block");
  if (mask_activation != "sigmoid")
    throw InvalidConfig("unet: unknown mask activation '" + mask_activation +
                        "'");
  stft.validate();
  const int f = stft.bins();
  if (padded_bins() - f > f - 1)
    throw InvalidConfig(
        "unet: frequency extent not reducible by the pooling plan, even "
        "with reflect padding");
}

Unet::Block Unet::make_block(int in_ch, int out_ch, tandem::Rng& rng) const {
  Block b;
  const int k = cfg_.kernel_size;
  const int pad = (k - 1) / 2;
  b.units.reserve(static_cast<std::size_t>(cfg_.convs_per_block));
  for (int j = 0; j < cfg_.convs_per_block; ++j) {
    const int in = j == 0 ? in_ch : out_ch;
    b.units.push_back(
        {nn::Conv2d(in, out_ch, k, k, 1, 1, pad, pad, rng),
         nn::BatchNorm(out_ch)});
  }
  return b;
}

Unet::Unet(const UnetConfig& cfg, std::uint64_t seed)
    : cfg_(cfg), seed_(seed) {
  cfg_.validate();
  tandem::Rng rng(tandem::derive_seed(seed, "unet"));

  auto level_ch = [&](int l) {
    int c = cfg_.base_channels;
    for (int i = 0; i < l; ++i) c *= cfg_.channel_growth;
    return c;
  };

  encoder_.reserve(static_cast<std::size_t>(cfg_.depth));
  for (int l = 0; l < cfg_.depth; ++l)
    encoder_.push_back(
        make_block(l == 0 ? 1 : level_ch(l - 1), level_ch(l), rng));

  bottleneck_ = make_block(level_ch(cfg_.depth - 1), level_ch(cfg_.depth), rng);

  // Execution order: innermost level first.
  decoder_.reserve(static_cast<std::size_t>(cfg_.depth));
  for (int l = cfg_.depth - 1; l >= 0; --l) {
    const int up_ch = l == cfg_.depth - 1 ? level_ch(cfg_.depth)
                                          : level_ch(l + 1);
    decoder_.push_back(make_block(up_ch + level_ch(l), level_ch(l), rng));
  }

  head_.emplace_back(level_ch(0), 1, 1, 1, 1, 1, 0, 0, rng);
}

nn::Variable Unet::run_block(Block& block, nn::Variable x, bool training,
                             const std::vector<int>* valid) {
  for (auto& unit : block.units)
    x = nn::relu(unit.bn.forward(unit.conv.forward(x), training, valid));
  return x;
}

nn::Variable Unet::forward(const nn::Variable& magnitudes, bool training,
                           const std::vector<int>* valid) {
  const nn::Tensor& mv = magnitudes.value();
  if (mv.ndim() != 4 || mv.dim(1) != 1 || mv.dim(2) != cfg_.stft.bins())
    throw InvalidInput("unet: expected magnitudes [b x 1 x " +
                       std::to_string(cfg_.stft.bins()) + " x t], got " +
                       mv.shape_str());
  if (mask_override_)
    return nn::Variable::leaf(nn::Tensor(mv.shape(), *mask_override_));

  nn::Variable x = nn::reflect_pad_freq(magnitudes, cfg_.padded_bins());
  std::vector<nn::Variable> skips;
  skips.reserve(encoder_.size());
  for (auto& block : encoder_) {
    x = run_block(block, x, training, valid);
    skips.push_back(x);
    if (cfg_.freq_pool == 2) x = nn::max_pool2d(x, 2, 1);
  }
  x = run_block(bottleneck_, x, training, valid);
  for (std::size_t i = 0; i < decoder_.size(); ++i) {
    const std::size_t level = decoder_.size() - 1 - i;
    if (cfg_.freq_pool == 2) x = nn::upsample_freq2(x);
    x = nn::concat_channels(x, skips[level]);
    x = run_block(decoder_[i], x, training, valid);
  }
  x = nn::sigmoid(head_[0].forward(x));
  return nn::crop_freq(x, cfg_.stft.bins());
}

FeatureMatrix Unet::estimate_mask(const FeatureMatrix& magnitude) {
  if (magnitude.rows != cfg_.stft.bins())
    throw InvalidInput("unet: magnitude has " +
                       std::to_string(magnitude.rows) + " rows, config needs " +
                       std::to_string(cfg_.stft.bins()));
  nn::NoGradGuard guard;
  nn::Tensor in({1, 1, magnitude.rows, magnitude.frames}, magnitude.values);
  const nn::Tensor out = forward(nn::Variable::leaf(in), false).value();
  FeatureMatrix mask(magnitude.rows, magnitude.frames);
  std::copy_n(out.data(), out.numel(), mask.values.begin());
  return mask;
}

namespace {

FeatureMatrix magnitude_of(const ComplexSpectrogram& spec) {
  FeatureMatrix m(spec.bins, spec.frames);
  for (int k = 0; k < spec.bins; ++k)
    for (int t = 0; t < spec.frames; ++t)
      m.at(k, t) = std::abs(spec.at(k, t));
  return m;
}

}  // namespace

Waveform Unet::enhance(const Waveform& noisy) {
  const ComplexSpectrogram spec = signal::stft(noisy, cfg_.stft);
  const FeatureMatrix mask = estimate_mask(magnitude_of(spec));
  ComplexSpectrogram masked = spec;
  for (int k = 0; k < spec.bins; ++k)
    for (int t = 0; t < spec.frames; ++t)
      masked.at(k, t) *= mask.at(k, t);
  Waveform out = signal::istft(masked);
  out.sample_rate = noisy.sample_rate;
  out.source_id = noisy.source_id;
  return out;
}

std::vector<nn::Variable> Unet::enhance_variables(
    const std::vector<Waveform>& mixtures, bool training) {
  if (mixtures.empty()) throw InvalidInput("unet: empty batch");
  const int b = static_cast<int>(mixtures.size());
  const int bins = cfg_.stft.bins();

  std::vector<ComplexSpectrogram> specs;
  specs.reserve(mixtures.size());
  std::vector<int> frames(mixtures.size());
  int t_max = 0;
  for (int i = 0; i < b; ++i) {
    specs.push_back(signal::stft(mixtures[static_cast<std::size_t>(i)],
                                 cfg_.stft));
    frames[static_cast<std::size_t>(i)] = specs.back().frames;
    t_max = std::max(t_max, specs.back().frames);
  }

  nn::Tensor mag({b, 1, bins, t_max});
  for (int i = 0; i < b; ++i) {
    const auto& spec = specs[static_cast<std::size_t>(i)];
    double* plane =
        mag.data() + static_cast<std::size_t>(i) * bins * t_max;
    for (int k = 0; k < bins; ++k)
      for (int t = 0; t < spec.frames; ++t)
        plane[static_cast<std::size_t>(k) * t_max + t] =
            std::abs(spec.at(k, t));
  }

  nn::Variable mask =
      forward(nn::Variable::leaf(std::move(mag)), training, &frames);

  std::vector<nn::Variable> estimates;
  estimates.reserve(mixtures.size());
  for (int i = 0; i < b; ++i) {
    const auto& spec = specs[static_cast<std::size_t>(i)];
    nn::Variable mi = nn::reshape(nn::select_item(mask, i), {bins, t_max});
    // Extra padded frames would pollute the overlap-add normalizer, so each
    // item is cut back to its true frame count before inversion.
    if (spec.frames < t_max) mi = nn::slice_last(mi, spec.frames);
    nn::Variable masked = nn::apply_mask_op(mi, spec);
    estimates.push_back(nn::istft_op(
        masked, cfg_.stft,
        static_cast<std::int64_t>(
            mixtures[static_cast<std::size_t>(i)].samples.size())));
  }
  return estimates;
}

std::vector<nn::Variable> Unet::ae_loss_per_sample(
    const std::vector<signal::MixtureSample>& batch, bool training) {
  if (batch.empty()) throw InvalidInput("unet: empty batch");
  std::vector<Waveform> mixtures;
  mixtures.reserve(batch.size());
  for (const auto& s : batch) mixtures.push_back(s.mixture);
  std::vector<nn::Variable> estimates = enhance_variables(mixtures, training);
  std::vector<nn::Variable> losses;
  losses.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i)
    losses.push_back(
        nn::wsdr_op(estimates[i], batch[i].clean, batch[i].mixture));
  return losses;
}

void Unet::collect(std::vector<nn::NamedParam>& params,
                   std::vector<nn::NamedBuffer>* buffers) {
  auto block = [&](Block& b, const std::string& prefix) {
    for (std::size_t j = 0; j < b.units.size(); ++j) {
      b.units[j].conv.collect(prefix + ".c" + std::to_string(j), params,
                              buffers);
      b.units[j].bn.collect(prefix + ".bn" + std::to_string(j), params,
                            buffers);
    }
  };
  for (std::size_t l = 0; l < encoder_.size(); ++l)
    block(encoder_[l], "enc" + std::to_string(l));
  block(bottleneck_, "mid");
  for (std::size_t i = 0; i < decoder_.size(); ++i)
    block(decoder_[i], "dec" + std::to_string(decoder_.size() - 1 - i));
  head_[0].collect("head", params, buffers);
}

std::size_t Unet::parameter_count() {
  std::vector<nn::NamedParam> params;
  collect(params);
  std::size_t n = 0;
  for (const auto& p : params) n += p.value.value().numel();
  return n;
}

}  // namespace tandem::enhancer
