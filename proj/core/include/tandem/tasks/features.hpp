// core/include/tandem/tasks/features.hpp

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

#ifndef TANDEM_TASKS_FEATURES_HPP_
#define TANDEM_TASKS_FEATURES_HPP_

#include <cstdint>
#include <string>

#include "tandem/nn/variable.hpp"
#include "tandem/signal/stft.hpp"

namespace tandem::tasks {

enum class TaskKind { kScr, kAsr, kSer, kAsc };

std::string task_name(TaskKind kind);            // "scr" | "asr" | "ser" | "asc"
TaskKind parse_task(const std::string& name);    // throws InvalidConfig

// Front-end contract per task. Each downstream model consumes exactly one of
// these; the parameters are part of the task definition, not tunables.
//   SCR: raw waveform.
//   ASR: MFCC, 40 mel bands -> 13 coefficients, 25 ms window / 10 ms hop.
//   SER: mel power spectrogram, 32 bands, 20 ms window / 10 ms hop.
//   ASC: log-mel spectrogram, 128 bands, 64 ms window / 16 ms hop.
struct FeatureSpec {
  std::string domain;  // "raw" | "mfcc" | "mel" | "log-mel"
  int n_mels = 0;
  int n_coeffs = 0;  // mfcc only
  signal::StftConfig stft;
};

FeatureSpec feature_spec(TaskKind kind);

// Feature rows produced per frame (0 for the raw-waveform front-end).
int feature_rows(TaskKind kind);

// Frames produced for a clip of the given sample count (0 for raw).
int feature_frames(TaskKind kind, std::int64_t samples);

// Differentiable front-end over one audio Variable [l]. Raw passes the input
// through; spectral kinds return [feature_rows x frames].
nn::Variable features_op(TaskKind kind, const nn::Variable& audio);

}  // namespace tandem::tasks

#endif  // TANDEM_TASKS_FEATURES_HPP_
