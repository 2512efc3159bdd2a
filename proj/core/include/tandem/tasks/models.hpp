// core/include/tandem/tasks/models.hpp

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

#ifndef TANDEM_TASKS_MODELS_HPP_
#define TANDEM_TASKS_MODELS_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "tandem/common/rng.hpp"
#include "tandem/nn/layers.hpp"
#include "tandem/signal/snr.hpp"
#include "tandem/tasks/features.hpp"

namespace tandem::tasks {

// ASR character set; CTC blank takes id 0 and these map to ids 1..28.
inline constexpr std::string_view kAsrAlphabet =
    "abcdefghijklmnopqrstuvwxyz '";

std::vector<int> encode_transcript(const std::string& text);  // InvalidInput
std::string decode_ids(const std::vector<int>& ids);

// Desk-scale architecture hyperparameters. The presets follow the published
// block structure of each head; widths are sized so every task trains on a
// CPU in minutes.
struct ModelConfig {
  int n_classes = 35;       // SCR/SER/ASC head width
  int scr_width = 16;       // first-layer channels of the 1-D CNN
  int ser_base_channels = 8;
  int asr_channels = 16;    // residual block channels
  int asr_gru_hidden = 48;
  int asr_gru_layers = 2;
  int asc_channels = 16;    // per frequency path
  int asc_mels = 128;       // split into low/high halves; must be even
  double dropout = 0.25;

  void validate(TaskKind kind) const;       // throws InvalidConfig
  std::string to_json(TaskKind kind) const;  // checkpoint config echo
};

// Shared interface of the four downstream models. Audio enters as one
// Variable per clip so gradients can continue into an upstream enhancer.
class TaskModel {
 public:
  virtual ~TaskModel() = default;

  TaskKind kind() const { return kind_; }
  const ModelConfig& config() const { return cfg_; }
  std::uint64_t seed() const { return seed_; }

  // Classification kinds return [b x n_classes]. ASR returns
  // [b x 29 x frames'] and reports the per-item valid frame count through
  // `valid` (required there, ignored otherwise).
  virtual nn::Variable forward(const std::vector<nn::Variable>& audio,
                               bool training,
                               std::vector<int>* valid = nullptr) = 0;

  // One non-negative loss Variable per item: cross-entropy for the
  // classification kinds, CTC negative log-likelihood for ASR.
  virtual std::vector<nn::Variable> per_sample_losses(
      const std::vector<nn::Variable>& audio,
      const std::vector<signal::Label>& labels, bool training) = 0;

  virtual void collect(std::vector<nn::NamedParam>& params,
                       std::vector<nn::NamedBuffer>* buffers = nullptr) = 0;
  std::size_t parameter_count();

  // Eval-mode inference on plain audio. `predict` is the classification
  // path (InvalidInput on ASR); `transcribe` the ASR path.
  std::vector<int> predict(const std::vector<signal::Waveform>& audio);
  std::vector<std::string> transcribe(const std::vector<signal::Waveform>& audio);

 protected:
  TaskModel(TaskKind kind, const ModelConfig& cfg, std::uint64_t seed);

  std::vector<nn::Variable> leaves_of(
      const std::vector<signal::Waveform>& audio) const;

  TaskKind kind_;
  ModelConfig cfg_;
  std::uint64_t seed_;
  tandem::Rng dropout_rng_;
};

std::unique_ptr<TaskModel> build_task_model(TaskKind kind,
                                            const ModelConfig& cfg,
                                            std::uint64_t seed);

}  // namespace tandem::tasks

#endif  // TANDEM_TASKS_MODELS_HPP_
