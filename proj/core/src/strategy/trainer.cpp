// core/src/strategy/trainer.cpp

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

#include "tandem/strategy/trainer.hpp"

#include <cmath>
#include <functional>
#include <numeric>

#include "json.hpp"
#include "tandem/common/error.hpp"
#include "tandem/nn/ops.hpp"
#include "tandem/nn/signal_ops.hpp"

namespace tandem::strategy {

namespace nn = tandem::nn;
using nn::Variable;
using signal::MixtureSample;

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::kBaseline: return "baseline";
    case Strategy::kDa: return "da";
    case Strategy::kColdCascade: return "cold_cascade";
    case Strategy::kColdCascadeDa: return "cold_cascade_da";
    case Strategy::kMtl: return "mtl";
    case Strategy::kIterative: return "iterative";
  }
  throw InvalidConfig("strategy_name: unknown strategy");
}

Strategy parse_strategy(const std::string& name) {
  for (Strategy s : {Strategy::kBaseline, Strategy::kDa,
                     Strategy::kColdCascade, Strategy::kColdCascadeDa,
                     Strategy::kMtl, Strategy::kIterative})
    if (strategy_name(s) == name) return s;
  throw InvalidConfig("parse_strategy: unknown strategy '" + name + "'");
}

bool strategy_uses_enhancer(Strategy s) {
  return s == Strategy::kColdCascade || s == Strategy::kColdCascadeDa ||
         s == Strategy::kMtl || s == Strategy::kIterative;
}

void StrategyConfig::validate() const {
  if (batch_size < 1) throw InvalidConfig("strategy: batch_size must be >= 1");
  if (epochs < 1) throw InvalidConfig("strategy: epochs must be >= 1");
  if (snr_low_db > snr_high_db)
    throw InvalidConfig("strategy: SNR range is reversed");
  if (ae_opt.lr <= 0.0 || cat_opt.lr <= 0.0)
    throw InvalidConfig("strategy: learning rates must be positive");
  if (ae_opt.weight_decay < 0.0 || cat_opt.weight_decay < 0.0)
    throw InvalidConfig("strategy: weight decay must be nonnegative");
  for (const auto& s : lr_schedule)
    if (s.epoch < 0 || s.lr <= 0.0)
      throw InvalidConfig("strategy: malformed lr schedule entry");
}

StrategyConfig default_config(Strategy s, tasks::TaskKind task) {
  constexpr double kL2 = 1e-4;
  StrategyConfig cfg;
  cfg.strategy = s;
  cfg.batch_size = 16;
  cfg.ae_opt = {1e-4, 0.0};
  switch (task) {
    case tasks::TaskKind::kScr:
      cfg.cat_opt = {1e-2, kL2};
      cfg.lr_schedule = {{20, 1e-3}};
      break;
    case tasks::TaskKind::kAsr:
      cfg.cat_opt = {1e-4, 0.0};
      break;
    case tasks::TaskKind::kSer:
      cfg.cat_opt = {1e-3, 0.0};
      break;
    case tasks::TaskKind::kAsc:
      cfg.cat_opt = {1e-4, kL2};
      break;
  }
  return cfg;
}

std::string TrainLog::to_jsonl() const {
  std::string out;
  for (const auto& e : entries) {
    nlohmann::json j;
    j["epoch"] = e.epoch;
    j["batch"] = e.batch;
    j["strategy"] = e.strategy;
    j["ae_loss"] = e.ae_loss ? nlohmann::json(*e.ae_loss) : nlohmann::json();
    j["ca_loss"] = e.ca_loss ? nlohmann::json(*e.ca_loss) : nlohmann::json();
    j["mean_weight_entropy"] = e.mean_weight_entropy;
    out += j.dump();
    out += '\n';
  }
  return out;
}

namespace {

Variable mean_of(const std::vector<Variable>& losses) {
  return nn::weighted_sum(losses,
                          std::vector<double>(losses.size(), 1.0),
                          static_cast<double>(losses.size()));
}

Variable leaf_of(const signal::Waveform& w) {
  return Variable::leaf(
      nn::Tensor({static_cast<int>(w.samples.size())}, w.samples));
}

std::vector<std::vector<std::size_t>> epoch_batches(std::size_t n,
                                                    int batch_size,
                                                    tandem::Rng& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i)
    std::swap(order[i - 1], order[rng.below(i)]);
  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t at = 0; at < n; at += static_cast<std::size_t>(batch_size)) {
    const std::size_t end =
        std::min(n, at + static_cast<std::size_t>(batch_size));
    batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(at),
                         order.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return batches;
}

std::vector<MixtureSample> gather(const std::vector<MixtureSample>& data,
                                  const std::vector<std::size_t>& idx) {
  std::vector<MixtureSample> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(data[i]);
  return out;
}

// Runs `epochs` passes of task-model updates where `audio_of` chooses what
// the model hears (clean, noisy, or enhanced).
void cat_epochs(const StrategyConfig& cfg,
                const std::vector<MixtureSample>& train,
                tasks::TaskModel& cat, nn::Adam& cat_opt, tandem::Rng& order,
                const std::function<Variable(const MixtureSample&)>& audio_of,
                TrainLog& log) {
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (const auto& s : cfg.lr_schedule)
      if (s.epoch == epoch) cat_opt.set_lr(s.lr);
    const auto batches = epoch_batches(train.size(), cfg.batch_size, order);
    for (std::size_t b = 0; b < batches.size(); ++b) {
      std::vector<Variable> audio;
      std::vector<signal::Label> labels;
      for (std::size_t i : batches[b]) {
        audio.push_back(audio_of(train[i]));
        labels.push_back(train[i].label);
      }
      Variable total = mean_of(cat.per_sample_losses(audio, labels, true));
      cat_opt.zero_grad();
      total.backward();
      cat_opt.step();
      log.entries.push_back({epoch, static_cast<int>(b),
                             strategy_name(cfg.strategy), std::nullopt,
                             total.value().item(),
                             std::log(static_cast<double>(batches[b].size()))});
    }
  }
}

// Enhancer pretraining passes on the plain mean wSDR loss.
void ae_epochs(const StrategyConfig& cfg,
               const std::vector<MixtureSample>& train, enhancer::Unet& ae,
               nn::Adam& ae_opt, tandem::Rng& order, TrainLog& log) {
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto batches = epoch_batches(train.size(), cfg.batch_size, order);
    for (std::size_t b = 0; b < batches.size(); ++b) {
      Variable total =
          mean_of(ae.ae_loss_per_sample(gather(train, batches[b]), true));
      ae_opt.zero_grad();
      total.backward();
      ae_opt.step();
      log.entries.push_back({epoch, static_cast<int>(b),
                             strategy_name(cfg.strategy),
                             total.value().item(), std::nullopt,
                             std::log(static_cast<double>(batches[b].size()))});
    }
  }
}

void mtl_epochs(const StrategyConfig& cfg,
                const std::vector<MixtureSample>& train, enhancer::Unet& ae,
                tasks::TaskModel& cat, nn::Adam& ae_opt, nn::Adam& cat_opt,
                tandem::Rng& order, TrainLog& log) {
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (const auto& s : cfg.lr_schedule)
      if (s.epoch == epoch) cat_opt.set_lr(s.lr);
    const auto batches = epoch_batches(train.size(), cfg.batch_size, order);
    for (std::size_t b = 0; b < batches.size(); ++b) {
      std::vector<signal::Waveform> mixtures;
      std::vector<signal::Label> labels;
      for (std::size_t i : batches[b]) {
        mixtures.push_back(train[i].mixture);
        labels.push_back(train[i].label);
      }
      std::vector<Variable> enhanced = ae.enhance_variables(mixtures, true);
      std::vector<Variable> ae_losses;
      for (std::size_t j = 0; j < batches[b].size(); ++j)
        ae_losses.push_back(nn::wsdr_op(enhanced[j],
                                        train[batches[b][j]].clean,
                                        train[batches[b][j]].mixture));
      Variable ae_mean = mean_of(ae_losses);
      Variable ca_mean = mean_of(cat.per_sample_losses(enhanced, labels, true));
      Variable total = mtl_loss(ae_mean, ca_mean);
      ae_opt.zero_grad();
      cat_opt.zero_grad();
      total.backward();
      ae_opt.step();
      cat_opt.step();
      log.entries.push_back({epoch, static_cast<int>(b),
                             strategy_name(cfg.strategy),
                             ae_mean.value().item(), ca_mean.value().item(),
                             std::log(static_cast<double>(batches[b].size()))});
    }
  }
}

}  // namespace

StepReport iterative_step(enhancer::Unet& ae, tasks::TaskModel& cat,
                          const std::vector<MixtureSample>& batch,
                          nn::Adam& ae_opt, nn::Adam& cat_opt) {
  if (batch.empty()) throw InvalidInput("iterative_step: empty batch");

  std::vector<signal::Label> labels;
  for (const auto& s : batch) labels.push_back(s.label);

  // Phase 1: adapt the task model to what the current enhancer produces.
  // Enhancement runs as plain eval inference, so the enhancer is not even
  // part of the graph, let alone updated.
  std::vector<Variable> heard;
  {
    nn::NoGradGuard freeze;
    for (const auto& s : batch) heard.push_back(leaf_of(ae.enhance(s.mixture)));
  }
  Variable ca_mean = mean_of(cat.per_sample_losses(heard, labels, true));
  cat_opt.zero_grad();
  ca_mean.backward();
  cat_opt.step();

  // Phase 2: re-enhance with gradients, rate each sample by the frozen task
  // model's loss on it, and push the enhancer toward the hard samples.
  std::vector<signal::Waveform> mixtures;
  for (const auto& s : batch) mixtures.push_back(s.mixture);
  std::vector<Variable> enhanced = ae.enhance_variables(mixtures, true);

  std::vector<double> frozen_losses;
  {
    nn::NoGradGuard freeze;
    std::vector<Variable> detached;
    for (const auto& e : enhanced) detached.push_back(Variable::leaf(e.value()));
    for (const auto& l : cat.per_sample_losses(detached, labels, false))
      frozen_losses.push_back(l.value().item());
  }
  const SampleWeights w = normalize_weights(frozen_losses);

  std::vector<Variable> ae_losses;
  for (std::size_t i = 0; i < batch.size(); ++i)
    ae_losses.push_back(
        nn::wsdr_op(enhanced[i], batch[i].clean, batch[i].mixture));
  Variable weighted = weighted_ae_loss(ae_losses, w);
  ae_opt.zero_grad();
  weighted.backward();
  ae_opt.step();

  StepReport report;
  report.ae_loss = weighted.value().item();
  report.ca_loss = ca_mean.value().item();
  report.weights = w.values;
  return report;
}

TrainLog run_strategy(const StrategyConfig& cfg,
                      const std::vector<MixtureSample>& train,
                      enhancer::Unet* ae, tasks::TaskModel& cat) {
  cfg.validate();
  if (train.empty()) throw ConfigError("run_strategy: empty training set");
  if (strategy_uses_enhancer(cfg.strategy) && ae == nullptr)
    throw ConfigError("run_strategy: strategy '" +
                      strategy_name(cfg.strategy) +
                      "' needs an enhancer model");

  std::vector<nn::NamedParam> cat_params;
  cat.collect(cat_params);
  nn::Adam cat_opt(cat_params, cfg.cat_opt.lr, cfg.cat_opt.weight_decay);

  std::optional<nn::Adam> ae_opt;
  if (ae != nullptr) {
    std::vector<nn::NamedParam> ae_params;
    ae->collect(ae_params);
    ae_opt.emplace(ae_params, cfg.ae_opt.lr, cfg.ae_opt.weight_decay);
  }

  tandem::Rng order(tandem::derive_seed(cfg.seed, "batch-order"));
  TrainLog log;

  switch (cfg.strategy) {
    case Strategy::kBaseline:
      cat_epochs(cfg, train, cat, cat_opt, order,
                 [](const MixtureSample& s) { return leaf_of(s.clean); }, log);
      break;
    case Strategy::kDa:
      cat_epochs(cfg, train, cat, cat_opt, order,
                 [](const MixtureSample& s) { return leaf_of(s.mixture); },
                 log);
      break;
    case Strategy::kColdCascade:
      ae_epochs(cfg, train, *ae, *ae_opt, order, log);
      cat_epochs(cfg, train, cat, cat_opt, order,
                 [](const MixtureSample& s) { return leaf_of(s.clean); }, log);
      break;
    case Strategy::kColdCascadeDa:
      ae_epochs(cfg, train, *ae, *ae_opt, order, log);
      cat_epochs(cfg, train, cat, cat_opt, order,
                 [ae](const MixtureSample& s) {
                   nn::NoGradGuard freeze;
                   return leaf_of(ae->enhance(s.mixture));
                 },
                 log);
      break;
    case Strategy::kMtl:
      mtl_epochs(cfg, train, *ae, cat, *ae_opt, cat_opt, order, log);
      break;
    case Strategy::kIterative:
      for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (const auto& s : cfg.lr_schedule)
          if (s.epoch == epoch) cat_opt.set_lr(s.lr);
        const auto batches =
            epoch_batches(train.size(), cfg.batch_size, order);
        for (std::size_t b = 0; b < batches.size(); ++b) {
          const StepReport r = iterative_step(*ae, cat, gather(train, batches[b]),
                                              *ae_opt, cat_opt);
          SampleWeights w;
          w.values = r.weights;
          log.entries.push_back({epoch, static_cast<int>(b),
                                 strategy_name(cfg.strategy), r.ae_loss,
                                 r.ca_loss, weight_entropy(w)});
        }
      }
      break;
  }
  return log;
}

}  // namespace tandem::strategy
