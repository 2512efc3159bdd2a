// tests/corpus/mixtures_test.cpp

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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "tandem/common/error.hpp"
#include "tandem/common/rng.hpp"
#include "tandem/corpus/mixtures.hpp"
#include "tandem/signal/wav_io.hpp"
#include "temp_dir.hpp"

namespace {

using tandem::InvalidConfig;
using tandem::InvalidInput;
using tandem::Rng;
using tandem::corpus::build_eval_mixtures_at;
using tandem::corpus::build_mixture_set;
using tandem::corpus::default_plan;
using tandem::corpus::eval_snrs_for;
using tandem::corpus::Manifest;
using tandem::corpus::ManifestEntry;
using tandem::corpus::MixturePlanSpec;
using tandem::corpus::NoisePolicy;
using tandem::corpus::noise_policy_name;
using tandem::corpus::parse_noise_policy;
using tandem::corpus::Split;
using tandem::signal::measure_snr;
using tandem::signal::Waveform;
using tandem::tasks::TaskKind;
using tandem::testing::TempDir;

// Writes `count` clips per split into dir and returns the manifest. `kind`
// selects tones (clean) or noise-like ramps so the two pools are distinct.
Manifest make_corpus(const TempDir& dir, const std::string& stem, int count,
                     int length, bool tones, int silent_index = -1) {
  Manifest m;
  m.root = dir.path;
  Rng rng(1234);
  int serial = 0;
  for (Split split : {Split::kTrain, Split::kDev, Split::kTest}) {
    for (int i = 0; i < count; ++i, ++serial) {
      Waveform w;
      w.samples.resize(static_cast<std::size_t>(length));
      if (serial == silent_index) {
        // leave silent
      } else if (tones) {
        const double f = 0.02 + 0.004 * (serial % 20);
        for (int t = 0; t < length; ++t)
          w.samples[static_cast<std::size_t>(t)] =
              0.4 * std::sin(2.0 * M_PI * f * t);
      } else {
        for (int t = 0; t < length; ++t)
          w.samples[static_cast<std::size_t>(t)] = 0.2 * rng.normal();
      }
      char name[64];
      std::snprintf(name, sizeof(name), "%s-%s-%03d.wav", stem.c_str(),
                    tandem::corpus::split_name(split).c_str(), i);
      tandem::signal::write_wav((dir.path / name).string(), w);
      ManifestEntry e;
      e.id = std::string(name, std::strlen(name) - 4);
      e.path = name;
      e.label = "class" + std::to_string(serial % 2);
      e.split = split;
      e.duration_s = static_cast<double>(length) / 16000.0;
      m.entries.push_back(std::move(e));
    }
  }
  return m;
}

TEST_CASE("published evaluation grids") {
  const std::vector<double> speech{25.0, 20.0, 15.0, 10.0, 5.0, 0.0};
  CHECK(eval_snrs_for(TaskKind::kScr) == speech);
  CHECK(eval_snrs_for(TaskKind::kAsr) == speech);
  CHECK(eval_snrs_for(TaskKind::kSer) == speech);
  const std::vector<double> scenes{-25.0, -20.0, -15.0, -10.0,
                                   -5.0,  0.0,   5.0,   10.0};
  CHECK(eval_snrs_for(TaskKind::kAsc) == scenes);

  const auto plan = default_plan(TaskKind::kScr, 3);
  CHECK(plan.train_snr_low_db == 0.0);
  CHECK(plan.train_snr_high_db == 25.0);
  CHECK(plan.eval_snrs_db == speech);
  CHECK(plan.seed == 3);
  CHECK_NOTHROW(plan.validate());
  CHECK(default_plan(TaskKind::kAsc).train_snr_low_db == -25.0);
}

TEST_CASE("plan validation and policy names") {
  MixturePlanSpec plan = default_plan(TaskKind::kScr);
  plan.train_snr_low_db = 10.0;
  plan.train_snr_high_db = 0.0;
  CHECK_THROWS_AS(plan.validate(), InvalidConfig);
  plan = default_plan(TaskKind::kScr);
  plan.eval_snrs_db.clear();
  CHECK_THROWS_AS(plan.validate(), InvalidConfig);
  plan.eval_snrs_db = {5.0, 5.0};
  CHECK_THROWS_AS(plan.validate(), InvalidConfig);

  CHECK(parse_noise_policy(noise_policy_name(NoisePolicy::kLoop)) ==
        NoisePolicy::kLoop);
  CHECK(parse_noise_policy(noise_policy_name(NoisePolicy::kCrop)) ==
        NoisePolicy::kCrop);
  CHECK_THROWS_AS(parse_noise_policy("tile"), InvalidConfig);
}

TEST_CASE("the speech grid over 100 clean items yields exactly 600 mixtures") {
  TempDir dir("mix-count");
  const auto clean = make_corpus(dir, "clean", 100, 2000, true);
  const auto noise = make_corpus(dir, "noise", 3, 2600, false);
  const auto plan = default_plan(TaskKind::kScr, 7);
  const auto set = build_mixture_set(clean, noise, plan, Split::kTest);
  CHECK(set.samples.size() == 600);

  // One full pass per grid point, in plan order.
  for (std::size_t i = 0; i < set.samples.size(); ++i)
    CHECK(set.samples[i].snr_db == plan.eval_snrs_db[i / 100]);

  // The pairing is per item: the same clean clip meets the same noise clip
  // at every SNR, at the same placement.
  const auto& lo = set.samples[0];
  const auto& hi = set.samples[500];
  REQUIRE(lo.noise.samples.size() == hi.noise.samples.size());
  const double ratio = hi.noise_gain / lo.noise_gain;
  double max_diff = 0.0;
  for (std::size_t t = 0; t < lo.noise.samples.size(); ++t)
    max_diff = std::max(max_diff, std::abs(lo.noise.samples[t] * ratio -
                                           hi.noise.samples[t]));
  CHECK(max_diff < 1e-9);
}

TEST_CASE("every emitted mixture satisfies its SNR tag and sum invariant") {
  TempDir dir("mix-snr");
  const auto clean = make_corpus(dir, "clean", 4, 2000, true);
  const auto noise = make_corpus(dir, "noise", 2, 2600, false);
  auto plan = default_plan(TaskKind::kAsc, 11);  // widest grid, negative SNRs
  for (Split split : {Split::kTrain, Split::kDev, Split::kTest}) {
    const auto set = build_mixture_set(clean, noise, plan, split);
    CHECK_FALSE(set.samples.empty());
    for (const auto& s : set.samples) {
      CHECK(std::abs(measure_snr(s.clean, s.noise) - s.snr_db) < 0.01);
      REQUIRE(s.mixture.samples.size() == s.clean.samples.size());
      double max_diff = 0.0;
      for (std::size_t t = 0; t < s.mixture.samples.size(); ++t)
        max_diff = std::max(
            max_diff, std::abs(s.mixture.samples[t] - (s.clean.samples[t] +
                                                       s.noise.samples[t])));
      CHECK(max_diff == 0.0);
      if (split == Split::kTrain) {
        CHECK(s.snr_db >= plan.train_snr_low_db);
        CHECK(s.snr_db <= plan.train_snr_high_db);
      }
    }
  }
}

TEST_CASE("same seed, same pairing and gains; labels ride along") {
  TempDir dir("mix-det");
  const auto clean = make_corpus(dir, "clean", 6, 2000, true);
  const auto noise = make_corpus(dir, "noise", 3, 2600, false);
  const auto plan = default_plan(TaskKind::kScr, 13);

  const auto a = build_mixture_set(clean, noise, plan, Split::kTrain);
  const auto b = build_mixture_set(clean, noise, plan, Split::kTrain);
  REQUIRE(a.samples.size() == b.samples.size());
  std::set<double> snrs;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].snr_db == b.samples[i].snr_db);
    CHECK(a.samples[i].noise_gain == b.samples[i].noise_gain);
    CHECK(a.samples[i].noise.samples == b.samples[i].noise.samples);
    CHECK(a.samples[i].label.cls == i % 2);
    CHECK(a.samples[i].label.transcript == "class" + std::to_string(i % 2));
    snrs.insert(a.samples[i].snr_db);
  }
  CHECK(snrs.size() > 1);  // the train range is actually sampled

  auto other = plan;
  other.seed = 14;
  const auto c = build_mixture_set(clean, noise, other, Split::kTrain);
  bool differs = false;
  for (std::size_t i = 0; i < a.samples.size(); ++i)
    differs = differs || a.samples[i].snr_db != c.samples[i].snr_db;
  CHECK(differs);

  // The single-SNR view used by the evaluation harness matches the full
  // grid's corresponding pass.
  const auto grid = build_mixture_set(clean, noise, plan, Split::kDev);
  const auto pass =
      build_eval_mixtures_at(clean, noise, plan, Split::kDev, 15.0);
  REQUIRE(pass.samples.size() == 6);
  const std::size_t off = 2 * 6;  // grid index of the 15 dB pass
  for (std::size_t i = 0; i < pass.samples.size(); ++i) {
    CHECK(pass.samples[i].noise_gain == grid.samples[off + i].noise_gain);
    CHECK(pass.samples[i].mixture.samples ==
          grid.samples[off + i].mixture.samples);
  }
}

TEST_CASE("silent clips are skipped with a warning, not mixed") {
  TempDir dir("mix-silent");
  const auto clean = make_corpus(dir, "clean", 3, 2000, true, 0);
  const auto noise = make_corpus(dir, "noise", 2, 2600, false);
  const auto set = build_mixture_set(clean, noise, default_plan(TaskKind::kScr, 1),
                                     Split::kTrain);
  CHECK(set.samples.size() == 2);
  REQUIRE(set.warnings.size() == 1);
  CHECK(set.warnings[0].find("silent clean clip") != std::string::npos);
  for (const auto& s : set.samples) CHECK(s.clean.energy() > 0.0);
}

TEST_CASE("empty pools are rejected") {
  TempDir dir("mix-empty");
  const auto clean = make_corpus(dir, "clean", 2, 2000, true);
  Manifest empty;
  empty.root = dir.path;
  CHECK_THROWS_AS(build_mixture_set(clean, empty,
                                    default_plan(TaskKind::kScr, 1),
                                    Split::kTrain),
                  InvalidInput);
  CHECK_THROWS_AS(build_mixture_set(empty, clean,
                                    default_plan(TaskKind::kScr, 1),
                                    Split::kTrain),
                  InvalidInput);
}

TEST_CASE("crop policy takes a contiguous window and needs long noise") {
  TempDir dir("mix-crop");
  const auto clean = make_corpus(dir, "clean", 2, 2000, true);

  // Ramp noise: a contiguous window has constant unit slope, a wrapped one
  // does not, so the policy is observable from the emitted noise.
  Manifest noise;
  noise.root = dir.path;
  {
    Waveform w;
    w.samples.resize(3000);
    for (int t = 0; t < 3000; ++t)
      w.samples[static_cast<std::size_t>(t)] = 1e-4 * t;
    tandem::signal::write_wav((dir.path / "ramp.wav").string(), w);
    ManifestEntry e;
    e.id = "ramp";
    e.path = "ramp.wav";
    e.label = "ramp";
    e.split = Split::kTrain;
    e.duration_s = 3000.0 / 16000.0;
    noise.entries.push_back(e);
  }

  auto plan = default_plan(TaskKind::kScr, 5);
  plan.noise_policy = NoisePolicy::kCrop;
  const auto set = build_mixture_set(clean, noise, plan, Split::kTrain);
  for (const auto& s : set.samples) {
    // A contiguous window of the rising ramp never steps down; a circular
    // wrap would show one large negative jump.
    const auto& n = s.noise.samples;
    double min_step = 0.0;
    for (std::size_t t = 1; t < n.size(); ++t)
      min_step = std::min(min_step, n[t] - n[t - 1]);
    CHECK(min_step >= 0.0);
    CHECK(n.back() > n.front());
  }

  // All noise shorter than the clean clip: crop cannot serve the request.
  const auto short_noise = make_corpus(dir, "shortnoise", 2, 1500, false);
  CHECK_THROWS_AS(build_mixture_set(clean, short_noise, plan, Split::kTrain),
                  InvalidInput);
}

}  // namespace
