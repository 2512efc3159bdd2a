// core/src/nn/signal_ops.cpp

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

#include "tandem/nn/signal_ops.hpp"

#include <cmath>
#include <complex>
#include <memory>
#include <vector>

#include "tandem/common/error.hpp"
#include "tandem/signal/fft.hpp"
#include "tandem/signal/sdr.hpp"
#include "tandem/signal/waveform.hpp"

namespace tandem::nn {
namespace {

using signal::ComplexSpectrogram;
using signal::Fft;
using signal::StftConfig;
using signal::Waveform;

Waveform to_waveform(const Tensor& t) {
  Waveform w;
  w.samples.assign(t.data(), t.data() + t.numel());
  w.sample_rate = signal::kSampleRate;
  return w;
}

}  // namespace

Tensor spec_to_tensor(const ComplexSpectrogram& spec) {
  const int f = spec.bins, t = spec.frames;
  Tensor out({2, f, t});
  const std::size_t plane = static_cast<std::size_t>(f) * t;
  for (int k = 0; k < f; ++k) {
    for (int j = 0; j < t; ++j) {
      const auto& v = spec.at(k, j);
      out[static_cast<std::size_t>(k) * t + j] = v.real();
      out[plane + static_cast<std::size_t>(k) * t + j] = v.imag();
    }
  }
  return out;
}

ComplexSpectrogram tensor_to_spec(const Tensor& t, const StftConfig& cfg,
                                  std::int64_t original_length) {
  if (t.ndim() != 3 || t.dim(0) != 2 || t.dim(1) != cfg.bins())
    throw InvalidInput("tensor_to_spec: expected [2 x bins x frames], got " +
                       t.shape_str());
  ComplexSpectrogram spec;
  spec.config = cfg;
  spec.bins = cfg.bins();
  spec.frames = t.dim(2);
  spec.original_length = original_length;
  spec.values.resize(static_cast<std::size_t>(spec.bins) * spec.frames);
  const std::size_t plane =
      static_cast<std::size_t>(spec.bins) * spec.frames;
  for (int k = 0; k < spec.bins; ++k)
    for (int j = 0; j < spec.frames; ++j)
      spec.at(k, j) = {t[static_cast<std::size_t>(k) * spec.frames + j],
                       t[plane + static_cast<std::size_t>(k) * spec.frames +
                         j]};
  return spec;
}

Variable stft_op(const Variable& x, const StftConfig& cfg) {
  if (x.value().ndim() != 1)
    throw InvalidInput("stft_op: input must be a rank-1 sample vector");
  const ComplexSpectrogram spec = signal::stft(to_waveform(x.value()), cfg);
  const int frames = spec.frames;
  Tensor out = spec_to_tensor(spec);

  return Variable::op(std::move(out), {x}, [cfg, frames](VarNode& self) {
    const Tensor& xv = self.parents[0]->value;
    const auto len = static_cast<std::int64_t>(xv.numel());
    const int n = cfg.fft_size;
    const int half = n / 2;
    const int bins = cfg.bins();
    const int pad = cfg.pad();
    const std::vector<double> win = cfg.make_window();
    const Fft fft(static_cast<std::size_t>(n));
    const std::size_t plane = static_cast<std::size_t>(bins) * frames;

    Tensor gx(xv.shape());
    std::vector<std::complex<double>> buf(static_cast<std::size_t>(n));
    for (int t = 0; t < frames; ++t) {
      for (int k = 0; k <= half; ++k)
        buf[static_cast<std::size_t>(k)] = {
            self.grad[static_cast<std::size_t>(k) * frames + t],
            self.grad[plane + static_cast<std::size_t>(k) * frames + t]};
      std::fill(buf.begin() + half + 1, buf.end(),
                std::complex<double>(0.0, 0.0));
      fft.inverse(buf.data());
      const std::int64_t start =
          static_cast<std::int64_t>(t) * cfg.hop_length - pad;
      for (int j = 0; j < cfg.window_length; ++j) {
        const std::int64_t at = start + j;
        if (at < 0 || at >= len) continue;
        gx[static_cast<std::size_t>(at)] +=
            win[static_cast<std::size_t>(j)] * n *
            buf[static_cast<std::size_t>(j)].real();
      }
    }
    self.parents[0]->accumulate(gx);
  });
}

Variable istft_op(const Variable& s, const StftConfig& cfg,
                  std::int64_t original_length) {
  const ComplexSpectrogram spec =
      tensor_to_spec(s.value(), cfg, original_length);
  const int frames = spec.frames;
  const Waveform w = signal::istft(spec);
  Tensor out({static_cast<int>(w.samples.size())},
             std::vector<double>(w.samples.begin(), w.samples.end()));

  return Variable::op(std::move(out), {s}, [cfg, frames](VarNode& self) {
    const int n = cfg.fft_size;
    const int half = n / 2;
    const int bins = cfg.bins();
    const int pad = cfg.pad();
    const std::vector<double> win = cfg.make_window();
    const Fft fft(static_cast<std::size_t>(n));
    const auto out_len = static_cast<std::int64_t>(self.grad.numel());
    const std::int64_t synth_len =
        static_cast<std::int64_t>(frames - 1) * cfg.hop_length +
        cfg.window_length;
    const std::size_t plane = static_cast<std::size_t>(bins) * frames;

    // Squared-window overlap-add normalizer over the padded axis; the
    // forward divided by it wherever it clears the floor.
    std::vector<double> den(static_cast<std::size_t>(synth_len), 0.0);
    for (int t = 0; t < frames; ++t) {
      const std::size_t off =
          static_cast<std::size_t>(t) * static_cast<std::size_t>(cfg.hop_length);
      for (int j = 0; j < cfg.window_length; ++j)
        den[off + j] +=
            win[static_cast<std::size_t>(j)] * win[static_cast<std::size_t>(j)];
    }
    std::vector<double> gnum(static_cast<std::size_t>(synth_len), 0.0);
    for (std::int64_t i = 0; i < out_len; ++i) {
      const std::int64_t p = i + pad;
      if (p >= synth_len) break;
      if (den[static_cast<std::size_t>(p)] > 1e-12)
        gnum[static_cast<std::size_t>(p)] =
            self.grad[static_cast<std::size_t>(i)] /
            den[static_cast<std::size_t>(p)];
    }

    Tensor gs(self.parents[0]->value.shape());
    std::vector<std::complex<double>> buf(static_cast<std::size_t>(n));
    for (int t = 0; t < frames; ++t) {
      const std::size_t off =
          static_cast<std::size_t>(t) * static_cast<std::size_t>(cfg.hop_length);
      for (int j = 0; j < n; ++j)
        buf[static_cast<std::size_t>(j)] =
            j < cfg.window_length
                ? std::complex<double>(
                      win[static_cast<std::size_t>(j)] * gnum[off + j], 0.0)
                : std::complex<double>(0.0, 0.0);
      fft.forward(buf.data());
      // Fold the full-spectrum adjoint back onto the stored half spectrum;
      // interior bins pick up their conjugate mirror's contribution.
      for (int k = 0; k <= half; ++k) {
        double gre = buf[static_cast<std::size_t>(k)].real();
        double gim = buf[static_cast<std::size_t>(k)].imag();
        if (k != 0 && k != half) {
          gre += buf[static_cast<std::size_t>(n - k)].real();
          gim -= buf[static_cast<std::size_t>(n - k)].imag();
        }
        gs[static_cast<std::size_t>(k) * frames + t] = gre / n;
        gs[plane + static_cast<std::size_t>(k) * frames + t] = gim / n;
      }
    }
    self.parents[0]->accumulate(gs);
  });
}

Variable apply_mask_op(const Variable& mask,
                       const ComplexSpectrogram& mixture) {
  const Tensor& mv = mask.value();
  if (mv.ndim() != 2 || mv.dim(0) != mixture.bins ||
      mv.dim(1) != mixture.frames)
    throw InvalidInput("apply_mask_op: mask shape " + mv.shape_str() +
                       " does not match the spectrogram");
  const int f = mixture.bins, t = mixture.frames;
  const std::size_t plane = static_cast<std::size_t>(f) * t;
  // Reorder the frame-major spectrogram into the plane layout once so the
  // backward pass is a flat elementwise product.
  auto y = std::make_shared<Tensor>(spec_to_tensor(mixture));
  Tensor out({2, f, t});
  for (std::size_t at = 0; at < plane; ++at) {
    out[at] = mv[at] * (*y)[at];
    out[plane + at] = mv[at] * (*y)[plane + at];
  }
  return Variable::op(std::move(out), {mask}, [y, plane](VarNode& self) {
    Tensor gm(self.parents[0]->value.shape());
    for (std::size_t at = 0; at < plane; ++at)
      gm[at] = self.grad[at] * (*y)[at] +
               self.grad[plane + at] * (*y)[plane + at];
    self.parents[0]->accumulate(gm);
  });
}

Variable power_op(const Variable& s) {
  const Tensor& sv = s.value();
  if (sv.ndim() != 3 || sv.dim(0) != 2)
    throw InvalidInput("power_op: expected [2 x bins x frames], got " +
                       sv.shape_str());
  const int f = sv.dim(1), t = sv.dim(2);
  const std::size_t plane = static_cast<std::size_t>(f) * t;
  Tensor out({f, t});
  for (std::size_t at = 0; at < plane; ++at)
    out[at] = sv[at] * sv[at] + sv[plane + at] * sv[plane + at];
  return Variable::op(std::move(out), {s}, [plane](VarNode& self) {
    const Tensor& sv2 = self.parents[0]->value;
    Tensor gs(sv2.shape());
    for (std::size_t at = 0; at < plane; ++at) {
      gs[at] = 2.0 * sv2[at] * self.grad[at];
      gs[plane + at] = 2.0 * sv2[plane + at] * self.grad[at];
    }
    self.parents[0]->accumulate(gs);
  });
}

namespace {

// d/db of -<a, b> / (|a| |b|); zero gradient when either vector vanishes.
void sdr_grad_wrt_estimate(const std::vector<double>& a,
                           const std::vector<double>& b, double scale,
                           std::vector<double>& acc) {
  double ea = 0.0, eb = 0.0, dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ea += a[i] * a[i];
    eb += b[i] * b[i];
    dot += a[i] * b[i];
  }
  if (ea <= 0.0 || eb <= 0.0) return;
  const double norm = std::sqrt(ea) * std::sqrt(eb);
  for (std::size_t i = 0; i < a.size(); ++i)
    acc[i] += scale * (-a[i] + (dot / eb) * b[i]) / norm;
}

}  // namespace

Variable wsdr_op(const Variable& x_hat, const Waveform& clean,
                 const Waveform& mixture) {
  const Tensor& xh = x_hat.value();
  if (xh.ndim() != 1 || xh.numel() != clean.samples.size() ||
      clean.samples.size() != mixture.samples.size())
    throw InvalidInput("wsdr_op: length mismatch");

  const Waveform est = to_waveform(xh);
  const double value = signal::wsdr_loss(clean, est, mixture);

  const std::size_t len = clean.samples.size();
  std::vector<double> noise(len), noise_est(len);
  double ex = 0.0, en = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    noise[i] = mixture.samples[i] - clean.samples[i];
    noise_est[i] = mixture.samples[i] - est.samples[i];
    ex += clean.samples[i] * clean.samples[i];
    en += noise[i] * noise[i];
  }
  auto grad = std::make_shared<std::vector<double>>(len, 0.0);
  if (ex + en > 0.0) {
    const double alpha = ex / (ex + en);
    sdr_grad_wrt_estimate(clean.samples, est.samples, alpha, *grad);
    // The noise estimate is mixture - x_hat, so its term enters negated.
    sdr_grad_wrt_estimate(noise, noise_est, -(1.0 - alpha), *grad);
  }
  return Variable::op(Tensor::scalar(value), {x_hat}, [grad](VarNode& self) {
    const double g = self.grad[0];
    Tensor gx({static_cast<int>(grad->size())});
    for (std::size_t i = 0; i < grad->size(); ++i) gx[i] = g * (*grad)[i];
    self.parents[0]->accumulate(gx);
  });
}

}  // namespace tandem::nn
