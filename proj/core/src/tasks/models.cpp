// core/src/tasks/models.cpp

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

#include "tandem/tasks/models.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

#include "json.hpp"
#include "tandem/common/error.hpp"
#include "tandem/nn/ops.hpp"
#include "tandem/nn/signal_ops.hpp"
#include "tandem/signal/mel.hpp"
#include "tandem/tasks/ctc.hpp"

namespace tandem::tasks {

namespace nn = tandem::nn;
using nn::Variable;
using signal::Label;
using signal::Waveform;

std::vector<int> encode_transcript(const std::string& text) {
  std::vector<int> ids;
  ids.reserve(text.size());
  for (char ch : text) {
    const auto pos = kAsrAlphabet.find(ch);
    if (pos == std::string_view::npos)
      throw InvalidInput(std::string("transcript character '") + ch +
                         "' outside the alphabet");
    ids.push_back(static_cast<int>(pos) + 1);  // 0 is the CTC blank
  }
  return ids;
}

std::string decode_ids(const std::vector<int>& ids) {
  std::string text;
  text.reserve(ids.size());
  for (int id : ids) {
    if (id < 1 || id > static_cast<int>(kAsrAlphabet.size()))
      throw InvalidInput("character id " + std::to_string(id) +
                         " outside the alphabet");
    text.push_back(kAsrAlphabet[static_cast<std::size_t>(id - 1)]);
  }
  return text;
}

void ModelConfig::validate(TaskKind kind) const {
  if (n_classes < 2 && kind != TaskKind::kAsr)
    throw InvalidConfig("model: need at least two classes");
  if (scr_width < 1 || ser_base_channels < 1 || asr_channels < 1 ||
      asc_channels < 1)
    throw InvalidConfig("model: channel counts must be positive");
  if (asr_gru_hidden < 1 || asr_gru_layers < 1)
    throw InvalidConfig("model: recurrent plan must be positive");
  if (dropout < 0.0 || dropout >= 1.0)
    throw InvalidConfig("model: dropout must lie in [0, 1)");
  if (kind == TaskKind::kAsc && (asc_mels < 2 || asc_mels % 2 != 0))
    throw InvalidConfig(
        "model: the scene classifier splits mel bands into two equal paths, "
        "so the mel count must be even");
}

std::string ModelConfig::to_json(TaskKind kind) const {
  nlohmann::json j;
  j["task"] = task_name(kind);
  j["n_classes"] = n_classes;
  j["scr_width"] = scr_width;
  j["ser_base_channels"] = ser_base_channels;
  j["asr_channels"] = asr_channels;
  j["asr_gru_hidden"] = asr_gru_hidden;
  j["asr_gru_layers"] = asr_gru_layers;
  j["asc_channels"] = asc_channels;
  j["asc_mels"] = asc_mels;
  j["dropout"] = dropout;
  return j.dump();
}

TaskModel::TaskModel(TaskKind kind, const ModelConfig& cfg, std::uint64_t seed)
    : kind_(kind),
      cfg_(cfg),
      seed_(seed),
      dropout_rng_(tandem::derive_seed(seed, "dropout")) {}

std::size_t TaskModel::parameter_count() {
  std::vector<nn::NamedParam> params;
  collect(params);
  std::size_t n = 0;
  for (const auto& p : params) n += p.value.value().numel();
  return n;
}

std::vector<Variable> TaskModel::leaves_of(
    const std::vector<Waveform>& audio) const {
  std::vector<Variable> vars;
  vars.reserve(audio.size());
  for (const auto& w : audio)
    vars.push_back(Variable::leaf(
        nn::Tensor({static_cast<int>(w.samples.size())}, w.samples)));
  return vars;
}

std::vector<int> TaskModel::predict(const std::vector<Waveform>& audio) {
  if (kind_ == TaskKind::kAsr)
    throw InvalidInput("predict: ASR decodes transcripts, use transcribe");
  if (audio.empty()) throw InvalidInput("predict: empty batch");
  nn::NoGradGuard guard;
  const nn::Tensor logits = forward(leaves_of(audio), false).value();
  const int k = logits.dim(1);
  std::vector<int> out(audio.size());
  for (std::size_t i = 0; i < audio.size(); ++i) {
    int best = 0;
    for (int c = 1; c < k; ++c)
      if (logits[i * static_cast<std::size_t>(k) + c] >
          logits[i * static_cast<std::size_t>(k) + best])
        best = c;
    out[i] = best;
  }
  return out;
}

std::vector<std::string> TaskModel::transcribe(
    const std::vector<Waveform>& audio) {
  if (kind_ != TaskKind::kAsr)
    throw InvalidInput("transcribe: only the ASR head emits text");
  if (audio.empty()) throw InvalidInput("transcribe: empty batch");
  nn::NoGradGuard guard;
  std::vector<int> valid;
  const Variable logits = forward(leaves_of(audio), false, &valid);
  const int symbols = logits.value().dim(1);
  const int frames = logits.value().dim(2);
  std::vector<std::string> out(audio.size());
  for (std::size_t i = 0; i < audio.size(); ++i) {
    const int v = valid[i];
    nn::Tensor item({symbols, v});
    const double* base = logits.value().data() +
                         i * static_cast<std::size_t>(symbols) * frames;
    for (int s = 0; s < symbols; ++s)
      for (int t = 0; t < v; ++t)
        item[static_cast<std::size_t>(s) * v + t] =
            base[static_cast<std::size_t>(s) * frames + t];
    out[i] = decode_ids(ctc_greedy_decode(item));
  }
  return out;
}

namespace {

int conv_out(int in, int k, int s, int p) { return (in + 2 * p - k) / s + 1; }

void require_valid(const std::vector<int>& valid, const char* stage) {
  for (int v : valid)
    if (v < 1)
      throw InvalidInput(std::string("task model: clip too short at ") +
                         stage);
}

std::vector<int> map_valid(const std::vector<int>& valid,
                           const std::function<int(int)>& f,
                           const char* stage) {
  std::vector<int> out(valid.size());
  for (std::size_t i = 0; i < valid.size(); ++i) out[i] = f(valid[i]);
  require_valid(out, stage);
  return out;
}

// Batches per-clip feature matrices [rows x t_i] into [b x 1 x rows x t_max]
// with zero padding; `valid` receives the true frame counts.
Variable batch_spectral(const std::vector<Variable>& audio,
                        const std::function<Variable(const Variable&)>& fn,
                        int rows, std::vector<int>& valid) {
  if (audio.empty()) throw InvalidInput("task model: empty batch");
  std::vector<Variable> feats;
  feats.reserve(audio.size());
  int t_max = 0;
  valid.resize(audio.size());
  for (std::size_t i = 0; i < audio.size(); ++i) {
    feats.push_back(fn(audio[i]));
    valid[i] = feats.back().value().dim(1);
    t_max = std::max(t_max, valid[i]);
  }
  for (auto& f : feats) f = nn::pad_last(f, t_max);
  Variable x = nn::stack_batch(feats);
  return nn::reshape(x, {static_cast<int>(audio.size()), 1, rows, t_max});
}

std::vector<Variable> classification_losses(const Variable& logits,
                                            const std::vector<Label>& labels,
                                            int n_classes) {
  std::vector<int> targets(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].cls < 0 || labels[i].cls >= n_classes)
      throw InvalidInput("label class " + std::to_string(labels[i].cls) +
                         " outside [0, " + std::to_string(n_classes) + ")");
    targets[i] = labels[i].cls;
  }
  Variable per_row = nn::cross_entropy_per_row(logits, targets);
  per_row = nn::reshape(per_row, {static_cast<int>(labels.size()), 1});
  std::vector<Variable> losses;
  losses.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i)
    losses.push_back(nn::select_item(per_row, static_cast<int>(i)));
  return losses;
}

void check_batch(const std::vector<Variable>& audio,
                 const std::vector<Label>& labels) {
  if (audio.empty()) throw InvalidInput("task model: empty batch");
  if (audio.size() != labels.size())
    throw InvalidInput("task model: audio and label counts differ");
}

// ---- speech command recognition: M5-style 1-D CNN on raw audio ----

class ScrModel : public TaskModel {
 public:
  ScrModel(const ModelConfig& cfg, std::uint64_t seed)
      : TaskModel(TaskKind::kScr, cfg, seed) {
    tandem::Rng rng(tandem::derive_seed(seed, "scr"));
    const int w = cfg.scr_width;
    c1_ = std::make_unique<nn::Conv1d>(1, w, 80, 4, 38, rng);
    bn1_ = std::make_unique<nn::BatchNorm>(w);
    c2_ = std::make_unique<nn::Conv1d>(w, w, 3, 1, 1, rng);
    bn2_ = std::make_unique<nn::BatchNorm>(w);
    c3_ = std::make_unique<nn::Conv1d>(w, 2 * w, 3, 1, 1, rng);
    bn3_ = std::make_unique<nn::BatchNorm>(2 * w);
    c4_ = std::make_unique<nn::Conv1d>(2 * w, 4 * w, 3, 1, 1, rng);
    bn4_ = std::make_unique<nn::BatchNorm>(4 * w);
    head_ = std::make_unique<nn::Linear>(4 * w, cfg.n_classes, rng);
  }

  Variable forward(const std::vector<Variable>& audio, bool training,
                   std::vector<int>* valid_out) override {
    if (audio.empty()) throw InvalidInput("task model: empty batch");
    std::vector<int> valid(audio.size());
    int l_max = 0;
    std::vector<Variable> items;
    items.reserve(audio.size());
    for (std::size_t i = 0; i < audio.size(); ++i) {
      if (audio[i].value().ndim() != 1)
        throw InvalidInput("scr: expected raw waveforms [l], got " +
                           audio[i].value().shape_str());
      valid[i] = static_cast<int>(audio[i].value().numel());
      l_max = std::max(l_max, valid[i]);
      items.push_back(audio[i]);
    }
    require_valid(valid, "input");
    for (auto& it : items) it = nn::pad_last(it, l_max);
    Variable x = nn::stack_batch(items);
    x = nn::reshape(x, {static_cast<int>(audio.size()), 1, l_max});

    auto unit = [&](nn::Conv1d& conv, nn::BatchNorm& bn, int k, int s, int p) {
      x = conv.forward(x);
      valid = map_valid(valid, [&](int v) { return conv_out(v, k, s, p); },
                        "conv");
      x = bn.forward(x, training, &valid);
      x = nn::mask_last(nn::relu(x), valid);
      x = nn::max_pool1d(x, 4);
      valid = map_valid(valid, [](int v) { return v / 4; }, "pool");
      x = nn::mask_last(x, valid);
    };
    unit(*c1_, *bn1_, 80, 4, 38);
    unit(*c2_, *bn2_, 3, 1, 1);
    unit(*c3_, *bn3_, 3, 1, 1);
    unit(*c4_, *bn4_, 3, 1, 1);

    if (valid_out) *valid_out = valid;
    return head_->forward(nn::masked_global_avg_pool(x, valid));
  }

  std::vector<Variable> per_sample_losses(const std::vector<Variable>& audio,
                                          const std::vector<Label>& labels,
                                          bool training) override {
    check_batch(audio, labels);
    return classification_losses(forward(audio, training, nullptr), labels,
                                 cfg_.n_classes);
  }

  void collect(std::vector<nn::NamedParam>& params,
               std::vector<nn::NamedBuffer>* buffers) override {
    c1_->collect("c1", params, buffers);
    bn1_->collect("bn1", params, buffers);
    c2_->collect("c2", params, buffers);
    bn2_->collect("bn2", params, buffers);
    c3_->collect("c3", params, buffers);
    bn3_->collect("bn3", params, buffers);
    c4_->collect("c4", params, buffers);
    bn4_->collect("bn4", params, buffers);
    head_->collect("head", params, buffers);
  }

 private:
  std::unique_ptr<nn::Conv1d> c1_, c2_, c3_, c4_;
  std::unique_ptr<nn::BatchNorm> bn1_, bn2_, bn3_, bn4_;
  std::unique_ptr<nn::Linear> head_;
};

// ---- speech emotion recognition: 4 conv blocks on mel-32 ----

class SerModel : public TaskModel {
 public:
  SerModel(const ModelConfig& cfg, std::uint64_t seed)
      : TaskModel(TaskKind::kSer, cfg, seed) {
    tandem::Rng rng(tandem::derive_seed(seed, "ser"));
    const int b = cfg.ser_base_channels;
    const int plan[4] = {b, 2 * b, 4 * b, 4 * b};
    int in = 1;
    for (int j = 0; j < 4; ++j) {
      convs_.push_back(
          std::make_unique<nn::Conv2d>(in, plan[j], 3, 3, 1, 1, 1, 1, rng));
      bns_.push_back(std::make_unique<nn::BatchNorm>(plan[j]));
      in = plan[j];
    }
    head_ = std::make_unique<nn::Linear>(4 * b, cfg.n_classes, rng);
  }

  Variable forward(const std::vector<Variable>& audio, bool training,
                   std::vector<int>* valid_out) override {
    std::vector<int> valid;
    Variable x = batch_spectral(
        audio,
        [](const Variable& a) { return features_op(TaskKind::kSer, a); },
        feature_rows(TaskKind::kSer), valid);
    require_valid(valid, "features");

    for (std::size_t j = 0; j < convs_.size(); ++j) {
      x = convs_[j]->forward(x);
      x = bns_[j]->forward(x, training, &valid);
      x = nn::mask_last(nn::relu(x), valid);
      x = nn::max_pool2d(x, 2, 2);
      valid = map_valid(valid, [](int v) { return v / 2; }, "pool");
      x = nn::mask_last(x, valid);
      x = nn::dropout(x, cfg_.dropout, training, dropout_rng_);
    }

    if (valid_out) *valid_out = valid;
    return head_->forward(nn::masked_global_avg_pool(x, valid));
  }

  std::vector<Variable> per_sample_losses(const std::vector<Variable>& audio,
                                          const std::vector<Label>& labels,
                                          bool training) override {
    check_batch(audio, labels);
    return classification_losses(forward(audio, training, nullptr), labels,
                                 cfg_.n_classes);
  }

  void collect(std::vector<nn::NamedParam>& params,
               std::vector<nn::NamedBuffer>* buffers) override {
    for (std::size_t j = 0; j < convs_.size(); ++j) {
      convs_[j]->collect("conv" + std::to_string(j), params, buffers);
      bns_[j]->collect("bn" + std::to_string(j), params, buffers);
    }
    head_->collect("head", params, buffers);
  }

 private:
  std::vector<std::unique_ptr<nn::Conv2d>> convs_;
  std::vector<std::unique_ptr<nn::BatchNorm>> bns_;
  std::unique_ptr<nn::Linear> head_;
};

// ---- acoustic scene classification: dual-path residual CNN on log-mel ----

class AscModel : public TaskModel {
 public:
  AscModel(const ModelConfig& cfg, std::uint64_t seed)
      : TaskModel(TaskKind::kAsc, cfg, seed),
        stft_(feature_spec(TaskKind::kAsc).stft),
        fb_({cfg.asc_mels, stft_.bins()},
            signal::mel_filterbank(cfg.asc_mels, stft_.bins(), stft_.fft_size,
                                   signal::kSampleRate)) {
    tandem::Rng rng(tandem::derive_seed(seed, "asc"));
    const int c = cfg.asc_channels;
    for (auto* path : {&low_, &high_}) {
      path->entry = std::make_unique<nn::Conv2d>(1, c, 3, 3, 1, 1, 1, 1, rng);
      path->entry_bn = std::make_unique<nn::BatchNorm>(c);
      for (int i = 0; i < 8; ++i) {
        path->block_bn.push_back(std::make_unique<nn::BatchNorm>(c));
        path->block_conv.push_back(
            std::make_unique<nn::Conv2d>(c, c, 3, 3, 1, 1, 1, 1, rng));
      }
    }
    fuse1_ = std::make_unique<nn::Conv2d>(2 * c, c, 1, 1, 1, 1, 0, 0, rng);
    fuse1_bn_ = std::make_unique<nn::BatchNorm>(c);
    fuse2_ = std::make_unique<nn::Conv2d>(c, cfg.n_classes, 1, 1, 1, 1, 0, 0,
                                          rng);
  }

  Variable forward(const std::vector<Variable>& audio, bool training,
                   std::vector<int>* valid_out) override {
    std::vector<int> valid;
    Variable x = batch_spectral(
        audio,
        [&](const Variable& a) {
          return nn::log_floor(
              nn::matmul_const_left(fb_,
                                    nn::power_op(nn::stft_op(a, stft_))),
              signal::kLogFloor);
        },
        cfg_.asc_mels, valid);
    require_valid(valid, "features");

    const int b = static_cast<int>(audio.size());
    const int t = x.value().dim(3);
    // Rows are contiguous, so regrouping the frequency axis splits the mel
    // bands into a low and a high half.
    x = nn::reshape(x, {b, 2, cfg_.asc_mels / 2, t});
    Variable lo = run_path(low_, nn::slice_channels(x, 0, 1), training, valid);
    Variable hi = run_path(high_, nn::slice_channels(x, 1, 2), training, valid);

    Variable y = nn::concat_channels(lo, hi);
    y = fuse1_->forward(y);
    y = fuse1_bn_->forward(y, training, &valid);
    y = nn::relu(y);
    y = fuse2_->forward(y);
    if (valid_out) *valid_out = valid;
    return nn::masked_global_avg_pool(y, valid);
  }

  std::vector<Variable> per_sample_losses(const std::vector<Variable>& audio,
                                          const std::vector<Label>& labels,
                                          bool training) override {
    check_batch(audio, labels);
    return classification_losses(forward(audio, training, nullptr), labels,
                                 cfg_.n_classes);
  }

  void collect(std::vector<nn::NamedParam>& params,
               std::vector<nn::NamedBuffer>* buffers) override {
    auto path = [&](Path& p, const std::string& prefix) {
      p.entry->collect(prefix + ".entry", params, buffers);
      p.entry_bn->collect(prefix + ".entry_bn", params, buffers);
      for (std::size_t i = 0; i < p.block_conv.size(); ++i) {
        p.block_bn[i]->collect(prefix + ".b" + std::to_string(i) + ".bn",
                               params, buffers);
        p.block_conv[i]->collect(prefix + ".b" + std::to_string(i) + ".c",
                                 params, buffers);
      }
    };
    path(low_, "low");
    path(high_, "high");
    fuse1_->collect("fuse1", params, buffers);
    fuse1_bn_->collect("fuse1_bn", params, buffers);
    fuse2_->collect("fuse2", params, buffers);
  }

 private:
  struct Path {
    std::unique_ptr<nn::Conv2d> entry;
    std::unique_ptr<nn::BatchNorm> entry_bn;
    std::vector<std::unique_ptr<nn::BatchNorm>> block_bn;
    std::vector<std::unique_ptr<nn::Conv2d>> block_conv;
  };

  Variable run_path(Path& p, Variable x, bool training,
                    const std::vector<int>& valid) {
    x = p.entry->forward(x);
    x = p.entry_bn->forward(x, training, &valid);
    x = nn::mask_last(nn::relu(x), valid);
    for (std::size_t i = 0; i < p.block_conv.size(); ++i) {
      // Pre-activation residual unit; masking keeps padded frames at zero
      // both before the conv reads them and after the skip add.
      Variable u = p.block_bn[i]->forward(x, training, &valid);
      u = nn::mask_last(nn::relu(u), valid);
      u = p.block_conv[i]->forward(u);
      x = nn::mask_last(nn::add(x, u), valid);
      if (i == 1 || i == 3 || i == 5) x = nn::max_pool2d(x, 2, 1);
    }
    return x;
  }

  signal::StftConfig stft_;
  nn::Tensor fb_;
  Path low_, high_;
  std::unique_ptr<nn::Conv2d> fuse1_, fuse2_;
  std::unique_ptr<nn::BatchNorm> fuse1_bn_;
};

// ---- automatic speech recognition: residual CNN + BiGRU with CTC ----

class AsrModel : public TaskModel {
 public:
  AsrModel(const ModelConfig& cfg, std::uint64_t seed)
      : TaskModel(TaskKind::kAsr, cfg, seed) {
    tandem::Rng rng(tandem::derive_seed(seed, "asr"));
    const int c = cfg.asr_channels;
    const int rows = feature_rows(TaskKind::kAsr);
    stem_ = std::make_unique<nn::Conv2d>(1, c, 3, 3, 1, 2, 1, 1, rng);
    stem_bn_ = std::make_unique<nn::BatchNorm>(c);
    for (int i = 0; i < 3; ++i) {
      Block blk;
      for (int j = 0; j < 2; ++j) {
        blk.conv.push_back(
            std::make_unique<nn::Conv2d>(c, c, 3, 3, 1, 1, 1, 1, rng));
        blk.bn.push_back(std::make_unique<nn::BatchNorm>(c));
      }
      blocks_.push_back(std::move(blk));
    }
    const int d = c * rows;
    ln_ = std::make_unique<nn::LayerNorm>(d);
    int in = d;
    for (int j = 0; j < cfg.asr_gru_layers; ++j) {
      grus_.push_back(std::make_unique<nn::GruBi>(in, cfg.asr_gru_hidden, rng));
      in = 2 * cfg.asr_gru_hidden;
    }
    head_ = std::make_unique<nn::Conv1d>(in, symbol_count(), 1, 1, 0, rng);
  }

  int symbol_count() const {
    return static_cast<int>(kAsrAlphabet.size()) + 1;
  }

  Variable forward(const std::vector<Variable>& audio, bool training,
                   std::vector<int>* valid_out) override {
    std::vector<int> valid;
    Variable x = batch_spectral(
        audio,
        [](const Variable& a) { return features_op(TaskKind::kAsr, a); },
        feature_rows(TaskKind::kAsr), valid);
    require_valid(valid, "features");

    x = stem_->forward(x);
    valid = map_valid(valid, [](int v) { return conv_out(v, 3, 2, 1); },
                      "stem");
    x = stem_bn_->forward(x, training, &valid);
    x = nn::mask_last(nn::gelu(x), valid);

    for (auto& blk : blocks_) {
      Variable u = x;
      for (std::size_t j = 0; j < blk.conv.size(); ++j) {
        u = blk.conv[j]->forward(u);
        u = blk.bn[j]->forward(u, training, &valid);
        u = nn::mask_last(nn::gelu(u), valid);
        u = nn::dropout(u, cfg_.dropout, training, dropout_rng_);
      }
      x = nn::mask_last(nn::add(x, u), valid);
    }

    const int b = x.value().dim(0);
    const int d = x.value().dim(1) * x.value().dim(2);
    const int frames = x.value().dim(3);
    x = nn::reshape(x, {b, d, frames});

    // Frame-wise layer normalization; each time step is one row batch.
    std::vector<Variable> steps;
    steps.reserve(static_cast<std::size_t>(frames));
    for (int t = 0; t < frames; ++t)
      steps.push_back(ln_->forward(nn::select_time(x, t)));
    x = nn::stack_time(steps);

    for (auto& gru : grus_) x = gru->forward(x, valid);
    if (valid_out) *valid_out = valid;
    return head_->forward(x);
  }

  std::vector<Variable> per_sample_losses(const std::vector<Variable>& audio,
                                          const std::vector<Label>& labels,
                                          bool training) override {
    check_batch(audio, labels);
    std::vector<int> valid;
    Variable logits = forward(audio, training, &valid);
    std::vector<Variable> losses;
    losses.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      Variable item = nn::select_item(logits, static_cast<int>(i));
      item = nn::slice_last(item, valid[i]);
      losses.push_back(ctc_loss_op(item, encode_transcript(labels[i].transcript)));
    }
    return losses;
  }

  void collect(std::vector<nn::NamedParam>& params,
               std::vector<nn::NamedBuffer>* buffers) override {
    stem_->collect("stem", params, buffers);
    stem_bn_->collect("stem_bn", params, buffers);
    for (std::size_t i = 0; i < blocks_.size(); ++i)
      for (std::size_t j = 0; j < blocks_[i].conv.size(); ++j) {
        const std::string prefix =
            "block" + std::to_string(i) + ".c" + std::to_string(j);
        blocks_[i].conv[j]->collect(prefix, params, buffers);
        blocks_[i].bn[j]->collect(
            "block" + std::to_string(i) + ".bn" + std::to_string(j), params,
            buffers);
      }
    ln_->collect("ln", params, buffers);
    for (std::size_t j = 0; j < grus_.size(); ++j)
      grus_[j]->collect("gru" + std::to_string(j), params, buffers);
    head_->collect("head", params, buffers);
  }

 private:
  struct Block {
    std::vector<std::unique_ptr<nn::Conv2d>> conv;
    std::vector<std::unique_ptr<nn::BatchNorm>> bn;
  };

  std::unique_ptr<nn::Conv2d> stem_;
  std::unique_ptr<nn::BatchNorm> stem_bn_;
  std::vector<Block> blocks_;
  std::unique_ptr<nn::LayerNorm> ln_;
  std::vector<std::unique_ptr<nn::GruBi>> grus_;
  std::unique_ptr<nn::Conv1d> head_;
};

}  // namespace

std::unique_ptr<TaskModel> build_task_model(TaskKind kind,
                                            const ModelConfig& cfg,
                                            std::uint64_t seed) {
  cfg.validate(kind);
  switch (kind) {
    case TaskKind::kScr: return std::make_unique<ScrModel>(cfg, seed);
    case TaskKind::kSer: return std::make_unique<SerModel>(cfg, seed);
    case TaskKind::kAsc: return std::make_unique<AscModel>(cfg, seed);
    case TaskKind::kAsr: return std::make_unique<AsrModel>(cfg, seed);
  }
  throw InvalidConfig("build_task_model: unknown kind");
}

}  // namespace tandem::tasks
