// tests/tasks/features_test.cpp

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

// The differentiable front-ends must agree numerically with the plain
// signal-processing implementations, which serve as the oracle here.

#include <cmath>
#include <vector>

#include "doctest.h"
#include "tandem/common/error.hpp"
#include "tandem/common/rng.hpp"
#include "tandem/nn/ops.hpp"
#include "tandem/nn/variable.hpp"
#include "tandem/signal/mel.hpp"
#include "tandem/signal/stft.hpp"
#include "tandem/signal/waveform.hpp"
#include "tandem/tasks/features.hpp"

namespace {

using tandem::InvalidConfig;
using tandem::InvalidInput;
using tandem::Rng;
using tandem::nn::Tensor;
using tandem::nn::Variable;
using tandem::signal::FeatureMatrix;
using tandem::signal::Waveform;
using tandem::tasks::TaskKind;

Waveform test_clip(int length, std::uint64_t seed) {
  Rng rng(seed);
  Waveform w;
  w.samples.resize(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i)
    w.samples[static_cast<std::size_t>(i)] =
        0.4 * std::sin(2.0 * M_PI * 0.017 * i) + 0.1 * rng.normal();
  return w;
}

Variable leaf_of(const Waveform& w, bool requires_grad = false) {
  return Variable::leaf(Tensor({static_cast<int>(w.samples.size())},
                               w.samples),
                        requires_grad);
}

void check_matches(const Tensor& got, const FeatureMatrix& want) {
  REQUIRE(got.ndim() == 2);
  REQUIRE(got.dim(0) == want.rows);
  REQUIRE(got.dim(1) == want.frames);
  for (int r = 0; r < want.rows; ++r)
    for (int t = 0; t < want.frames; ++t)
      CHECK(got[static_cast<std::size_t>(r) * want.frames + t] ==
            doctest::Approx(want.at(r, t)).epsilon(1e-9));
}

TEST_CASE("task names round-trip") {
  using tandem::tasks::parse_task;
  using tandem::tasks::task_name;
  for (TaskKind k :
       {TaskKind::kScr, TaskKind::kAsr, TaskKind::kSer, TaskKind::kAsc})
    CHECK(parse_task(task_name(k)) == k);
  CHECK_THROWS_AS(parse_task("piano"), InvalidConfig);
}

TEST_CASE("raw front-end passes audio through untouched") {
  const Waveform w = test_clip(400, 41);
  Variable x = leaf_of(w);
  const Tensor out = tandem::tasks::features_op(TaskKind::kScr, x).value();
  REQUIRE(out.numel() == w.samples.size());
  for (std::size_t i = 0; i < out.numel(); ++i)
    CHECK(out[i] == w.samples[i]);
  CHECK(tandem::tasks::feature_rows(TaskKind::kScr) == 0);
  CHECK(tandem::tasks::feature_frames(TaskKind::kScr, 400) == 0);
}

TEST_CASE("ASR front-end matches the mfcc oracle") {
  const auto spec = tandem::tasks::feature_spec(TaskKind::kAsr);
  CHECK(spec.domain == "mfcc");
  CHECK(spec.n_mels == 40);
  CHECK(spec.n_coeffs == 13);
  CHECK(spec.stft.window_length == 400);
  CHECK(spec.stft.hop_length == 160);

  const Waveform w = test_clip(3200, 42);
  const FeatureMatrix want =
      tandem::signal::mfcc(w, spec.n_mels, spec.n_coeffs, spec.stft);
  const Tensor got =
      tandem::tasks::features_op(TaskKind::kAsr, leaf_of(w)).value();
  check_matches(got, want);
  CHECK(tandem::tasks::feature_rows(TaskKind::kAsr) == 13);
  CHECK(tandem::tasks::feature_frames(TaskKind::kAsr, 3200) == want.frames);
}

TEST_CASE("SER front-end matches the mel oracle") {
  const auto spec = tandem::tasks::feature_spec(TaskKind::kSer);
  CHECK(spec.domain == "mel");
  CHECK(spec.n_mels == 32);
  CHECK(spec.stft.window_length == 320);
  CHECK(spec.stft.hop_length == 160);

  const Waveform w = test_clip(2400, 43);
  const FeatureMatrix want =
      tandem::signal::mel_spectrogram(w, spec.n_mels, spec.stft, false);
  const Tensor got =
      tandem::tasks::features_op(TaskKind::kSer, leaf_of(w)).value();
  check_matches(got, want);
}

TEST_CASE("ASC front-end matches the log-mel oracle") {
  const auto spec = tandem::tasks::feature_spec(TaskKind::kAsc);
  CHECK(spec.domain == "log-mel");
  CHECK(spec.n_mels == 128);
  CHECK(spec.stft.window_length == 1024);
  CHECK(spec.stft.hop_length == 256);

  const Waveform w = test_clip(5000, 44);
  const FeatureMatrix want =
      tandem::signal::mel_spectrogram(w, spec.n_mels, spec.stft, true);
  const Tensor got =
      tandem::tasks::features_op(TaskKind::kAsc, leaf_of(w)).value();
  check_matches(got, want);
}

TEST_CASE("spectral front-ends are differentiable down to the audio") {
  for (TaskKind k : {TaskKind::kAsr, TaskKind::kSer, TaskKind::kAsc}) {
    const Waveform w = test_clip(2048, 45);
    Variable x = leaf_of(w, true);
    Variable loss = tandem::nn::mean(tandem::tasks::features_op(k, x));
    loss.backward();
    REQUIRE(x.has_grad());
    double l1 = 0.0;
    for (std::size_t i = 0; i < x.grad().numel(); ++i) {
      CHECK(std::isfinite(x.grad()[i]));
      l1 += std::abs(x.grad()[i]);
    }
    CHECK(l1 > 0.0);
  }
}

TEST_CASE("front-ends reject non-audio shapes") {
  Variable m = Variable::leaf(Tensor({2, 3}, 1.0));
  CHECK_THROWS_AS(tandem::tasks::features_op(TaskKind::kAsr, m), InvalidInput);
  CHECK_THROWS_AS(tandem::tasks::features_op(TaskKind::kSer, m), InvalidInput);
}

}  // namespace
