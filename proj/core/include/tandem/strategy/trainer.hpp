// core/include/tandem/strategy/trainer.hpp

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

#ifndef TANDEM_STRATEGY_TRAINER_HPP_
#define TANDEM_STRATEGY_TRAINER_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tandem/enhancer/unet.hpp"
#include "tandem/nn/adam.hpp"
#include "tandem/signal/snr.hpp"
#include "tandem/strategy/weights.hpp"
#include "tandem/tasks/models.hpp"

namespace tandem::strategy {

// The six training paradigms. `baseline` sees clean audio only; `da` trains
// the task model on raw mixtures; the cascades pretrain the enhancer; `mtl`
// optimizes the joint sum; `iterative` alternates the two updates per batch
// with sample-importance weighting.
enum class Strategy {
  kBaseline,
  kDa,
  kColdCascade,
  kColdCascadeDa,
  kMtl,
  kIterative,
};

std::string strategy_name(Strategy s);
Strategy parse_strategy(const std::string& name);  // throws InvalidConfig
bool strategy_uses_enhancer(Strategy s);

struct OptimizerConfig {
  double lr = 1e-4;
  double weight_decay = 0.0;
};

// Learning-rate override that takes effect at the start of `epoch`.
struct LrStep {
  int epoch = 0;
  double lr = 0.0;
};

struct StrategyConfig {
  Strategy strategy = Strategy::kBaseline;
  OptimizerConfig ae_opt;
  OptimizerConfig cat_opt;
  int batch_size = 16;
  int epochs = 1;
  double snr_low_db = 0.0;  // training mixture range, recorded for the log
  double snr_high_db = 25.0;
  std::uint64_t seed = 0;
  std::vector<LrStep> lr_schedule;  // applies to the task optimizer

  void validate() const;  // throws InvalidConfig
};

// Published per-task settings: batch 16; learning rate 1e-4 for the
// enhancer, ASR and ASC, 1e-3 for SER; SCR starts at 1e-2 and drops to 1e-3
// after 20 epochs; SCR and ASC carry L2 weight decay.
StrategyConfig default_config(Strategy s, tasks::TaskKind task);

struct StepReport {
  std::optional<double> ae_loss;
  std::optional<double> ca_loss;
  std::vector<double> weights;  // iterative only, else empty
};

struct TrainLogEntry {
  int epoch = 0;
  int batch = 0;
  std::string strategy;
  std::optional<double> ae_loss;
  std::optional<double> ca_loss;
  double mean_weight_entropy = 0.0;
};

struct TrainLog {
  std::vector<TrainLogEntry> entries;
  std::string to_jsonl() const;  // one JSON object per line
};

// One alternating update on one batch. Phase 1 adapts the task model to the
// current enhancer's eval-mode output with the enhancer untouched; Phase 2
// freezes the task model, re-enhances with gradients, weighs each sample by
// its frozen task loss, and updates the enhancer alone.
StepReport iterative_step(enhancer::Unet& ae, tasks::TaskModel& cat,
                          const std::vector<signal::MixtureSample>& batch,
                          nn::Adam& ae_opt, nn::Adam& cat_opt);

// Trains in place under the chosen paradigm and returns the batch-level log.
// `ae` may be null for the strategies that never touch an enhancer; passing
// null where one is required is a ConfigError, as is an empty dataset.
TrainLog run_strategy(const StrategyConfig& cfg,
                      const std::vector<signal::MixtureSample>& train,
                      enhancer::Unet* ae, tasks::TaskModel& cat);

}  // namespace tandem::strategy

#endif  // TANDEM_STRATEGY_TRAINER_HPP_
