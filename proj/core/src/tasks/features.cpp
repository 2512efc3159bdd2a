// core/src/tasks/features.cpp

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

#include "tandem/tasks/features.hpp"

#include "tandem/common/error.hpp"
#include "tandem/nn/ops.hpp"
#include "tandem/nn/signal_ops.hpp"
#include "tandem/signal/mel.hpp"
#include "tandem/signal/waveform.hpp"

namespace tandem::tasks {

namespace nn = tandem::nn;

std::string task_name(TaskKind kind) {
  switch (kind) {
    case TaskKind::kScr: return "scr";
    case TaskKind::kAsr: return "asr";
    case TaskKind::kSer: return "ser";
    case TaskKind::kAsc: return "asc";
  }
  throw InvalidConfig("task_name: unknown kind");
}

TaskKind parse_task(const std::string& name) {
  if (name == "scr") return TaskKind::kScr;
  if (name == "asr") return TaskKind::kAsr;
  if (name == "ser") return TaskKind::kSer;
  if (name == "asc") return TaskKind::kAsc;
  throw InvalidConfig("parse_task: unknown task '" + name + "'");
}

FeatureSpec feature_spec(TaskKind kind) {
  FeatureSpec spec;
  switch (kind) {
    case TaskKind::kScr:
      spec.domain = "raw";
      return spec;
    case TaskKind::kAsr:
      spec.domain = "mfcc";
      spec.n_mels = 40;
      spec.n_coeffs = 13;
      spec.stft.window_length = 400;  // 25 ms at 16 kHz
      spec.stft.hop_length = 160;     // 10 ms
      spec.stft.fft_size = 512;
      return spec;
    case TaskKind::kSer:
      spec.domain = "mel";
      spec.n_mels = 32;
      spec.stft.window_length = 320;  // 20 ms
      spec.stft.hop_length = 160;     // 10 ms
      spec.stft.fft_size = 512;
      return spec;
    case TaskKind::kAsc:
      spec.domain = "log-mel";
      spec.n_mels = 128;
      spec.stft.window_length = 1024;  // 64 ms
      spec.stft.hop_length = 256;      // 16 ms
      spec.stft.fft_size = 1024;
      return spec;
  }
  throw InvalidConfig("feature_spec: unknown kind");
}

int feature_rows(TaskKind kind) {
  const FeatureSpec spec = feature_spec(kind);
  if (spec.domain == "raw") return 0;
  return spec.domain == "mfcc" ? spec.n_coeffs : spec.n_mels;
}

int feature_frames(TaskKind kind, std::int64_t samples) {
  const FeatureSpec spec = feature_spec(kind);
  if (spec.domain == "raw") return 0;
  return signal::stft_frame_count(samples, spec.stft);
}

namespace {

// The filterbank and DCT matrices depend only on the task kind, so they are
// built once and shared.
const nn::Tensor& filterbank_for(const FeatureSpec& spec) {
  static const nn::Tensor asr_fb(
      {feature_spec(TaskKind::kAsr).n_mels,
       feature_spec(TaskKind::kAsr).stft.bins()},
      signal::mel_filterbank(feature_spec(TaskKind::kAsr).n_mels,
                             feature_spec(TaskKind::kAsr).stft.bins(),
                             feature_spec(TaskKind::kAsr).stft.fft_size,
                             signal::kSampleRate));
  static const nn::Tensor ser_fb(
      {feature_spec(TaskKind::kSer).n_mels,
       feature_spec(TaskKind::kSer).stft.bins()},
      signal::mel_filterbank(feature_spec(TaskKind::kSer).n_mels,
                             feature_spec(TaskKind::kSer).stft.bins(),
                             feature_spec(TaskKind::kSer).stft.fft_size,
                             signal::kSampleRate));
  static const nn::Tensor asc_fb(
      {feature_spec(TaskKind::kAsc).n_mels,
       feature_spec(TaskKind::kAsc).stft.bins()},
      signal::mel_filterbank(feature_spec(TaskKind::kAsc).n_mels,
                             feature_spec(TaskKind::kAsc).stft.bins(),
                             feature_spec(TaskKind::kAsc).stft.fft_size,
                             signal::kSampleRate));
  if (spec.n_mels == 40) return asr_fb;
  if (spec.n_mels == 32) return ser_fb;
  return asc_fb;
}

const nn::Tensor& dct_for(const FeatureSpec& spec) {
  static const nn::Tensor asr_dct(
      {feature_spec(TaskKind::kAsr).n_coeffs,
       feature_spec(TaskKind::kAsr).n_mels},
      signal::dct2_matrix(feature_spec(TaskKind::kAsr).n_coeffs,
                          feature_spec(TaskKind::kAsr).n_mels));
  (void)spec;
  return asr_dct;
}

}  // namespace

nn::Variable features_op(TaskKind kind, const nn::Variable& audio) {
  if (audio.value().ndim() != 1)
    throw InvalidInput("features_op: expected a waveform Variable [l], got " +
                       audio.value().shape_str());
  const FeatureSpec spec = feature_spec(kind);
  if (spec.domain == "raw") return audio;

  nn::Variable power = nn::power_op(nn::stft_op(audio, spec.stft));
  nn::Variable mel = nn::matmul_const_left(filterbank_for(spec), power);
  if (spec.domain == "mel") return mel;
  nn::Variable logmel = nn::log_floor(mel, signal::kLogFloor);
  if (spec.domain == "log-mel") return logmel;
  return nn::matmul_const_left(dct_for(spec), logmel);
}

}  // namespace tandem::tasks
