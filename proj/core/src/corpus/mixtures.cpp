// core/src/corpus/mixtures.cpp

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

#include "tandem/corpus/mixtures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "tandem/common/error.hpp"
#include "tandem/common/rng.hpp"

namespace tandem::corpus {

using signal::MixtureSample;
using signal::Waveform;

namespace {

// Clean and noise pools for one split, loaded once. Silent clips are culled
// here so every downstream mix has positive noise energy.
struct Pools {
  std::vector<const ManifestEntry*> clean;
  std::vector<Waveform> clean_audio;
  std::vector<const ManifestEntry*> noise;
  std::vector<Waveform> noise_audio;
  std::map<std::string, int> class_ids;
};

Pools load_pools(const Manifest& clean, const Manifest& noise, Split split,
                 std::vector<std::string>* warnings) {
  Pools p;
  for (const auto* e : clean.split(split)) {
    auto w = load_entry(clean, *e);
    if (w.energy() == 0.0) {
      warnings->push_back("silent clean clip '" + e->id + "' skipped");
      continue;
    }
    p.clean.push_back(e);
    p.clean_audio.push_back(std::move(w));
  }
  for (const auto* e : noise.split(split)) {
    auto w = load_entry(noise, *e);
    if (w.energy() == 0.0) {
      warnings->push_back("silent noise clip '" + e->id + "' skipped");
      continue;
    }
    p.noise.push_back(e);
    p.noise_audio.push_back(std::move(w));
  }
  if (p.clean.empty())
    throw InvalidInput("no usable clean clips in split " + split_name(split));
  if (p.noise.empty())
    throw InvalidInput("no usable noise clips in split " + split_name(split));
  const auto names = clean.class_names();
  for (std::size_t i = 0; i < names.size(); ++i)
    p.class_ids[names[i]] = static_cast<int>(i);
  return p;
}

signal::Label label_of(const Pools& p, const ManifestEntry& e) {
  signal::Label label;
  label.transcript = e.label;
  const auto it = p.class_ids.find(e.label);
  if (it != p.class_ids.end()) label.cls = it->second;
  return label;
}

// Fits the chosen noise clip to the clean clip under the plan's policy and
// mixes at the requested SNR. `placement` seeds the offset or window draw.
MixtureSample mix_one(const Waveform& clean, const Waveform& noise,
                      double snr_db, NoisePolicy policy,
                      std::uint64_t placement) {
  if (policy == NoisePolicy::kLoop) {
    const auto offset = placement % noise.samples.size();
    return signal::mix_at_snr(clean, noise, snr_db, offset);
  }
  if (noise.samples.size() < clean.samples.size())
    throw InvalidInput("crop policy: noise clip shorter than clean clip");
  const auto span = noise.samples.size() - clean.samples.size() + 1;
  const auto start = placement % span;
  Waveform window;
  window.samples.assign(noise.samples.begin() + static_cast<long>(start),
                        noise.samples.begin() +
                            static_cast<long>(start + clean.samples.size()));
  window.source_id = noise.source_id;
  return signal::mix_at_snr(clean, window, snr_db, 0);
}

}  // namespace

std::string noise_policy_name(NoisePolicy policy) {
  return policy == NoisePolicy::kLoop ? "loop" : "crop";
}

NoisePolicy parse_noise_policy(const std::string& name) {
  if (name == "loop") return NoisePolicy::kLoop;
  if (name == "crop") return NoisePolicy::kCrop;
  throw InvalidConfig("unknown noise policy '" + name + "'");
}

void MixturePlanSpec::validate() const {
  if (!(train_snr_low_db <= train_snr_high_db))
    throw InvalidConfig("mixture plan: train SNR range not ordered");
  if (eval_snrs_db.empty())
    throw InvalidConfig("mixture plan: empty eval SNR grid");
  std::set<double> unique(eval_snrs_db.begin(), eval_snrs_db.end());
  if (unique.size() != eval_snrs_db.size())
    throw InvalidConfig("mixture plan: duplicate eval SNR");
  for (double s : eval_snrs_db)
    if (!std::isfinite(s)) throw InvalidConfig("mixture plan: non-finite SNR");
}

std::vector<double> eval_snrs_for(tasks::TaskKind task) {
  if (task == tasks::TaskKind::kAsc)
    return {-25.0, -20.0, -15.0, -10.0, -5.0, 0.0, 5.0, 10.0};
  return {25.0, 20.0, 15.0, 10.0, 5.0, 0.0};
}

MixturePlanSpec default_plan(tasks::TaskKind task, std::uint64_t seed) {
  MixturePlanSpec plan;
  plan.eval_snrs_db = eval_snrs_for(task);
  plan.seed = seed;
  if (task == tasks::TaskKind::kAsc) {
    plan.train_snr_low_db = -25.0;
    plan.train_snr_high_db = 10.0;
  }
  return plan;
}

MixtureSet build_eval_mixtures_at(const Manifest& clean, const Manifest& noise,
                                  const MixturePlanSpec& plan, Split split,
                                  double snr_db) {
  plan.validate();
  MixtureSet set;
  const Pools p = load_pools(clean, noise, split, &set.warnings);
  for (std::size_t i = 0; i < p.clean.size(); ++i) {
    const auto& entry = *p.clean[i];
    const auto pick = derive_seed(plan.seed, "pair/" + entry.id);
    const auto placement = derive_seed(plan.seed, "offset/" + entry.id);
    const auto& noise_clip = p.noise_audio[pick % p.noise.size()];
    auto sample =
        mix_one(p.clean_audio[i], noise_clip, snr_db, plan.noise_policy,
                placement);
    sample.label = label_of(p, entry);
    set.samples.push_back(std::move(sample));
  }
  return set;
}

MixtureSet build_mixture_set(const Manifest& clean, const Manifest& noise,
                             const MixturePlanSpec& plan, Split split) {
  plan.validate();
  if (split != Split::kTrain) {
    MixtureSet set;
    for (double snr : plan.eval_snrs_db) {
      auto pass = build_eval_mixtures_at(clean, noise, plan, split, snr);
      if (set.samples.empty()) set.warnings = std::move(pass.warnings);
      std::move(pass.samples.begin(), pass.samples.end(),
                std::back_inserter(set.samples));
    }
    return set;
  }

  MixtureSet set;
  const Pools p = load_pools(clean, noise, split, &set.warnings);
  for (std::size_t i = 0; i < p.clean.size(); ++i) {
    const auto& entry = *p.clean[i];
    Rng rng(derive_seed(plan.seed, "train-mix/" + entry.id));
    const double snr =
        rng.uniform(plan.train_snr_low_db, plan.train_snr_high_db);
    const auto& noise_clip = p.noise_audio[rng.below(p.noise.size())];
    auto sample =
        mix_one(p.clean_audio[i], noise_clip, snr, plan.noise_policy,
                rng.raw());
    sample.label = label_of(p, entry);
    set.samples.push_back(std::move(sample));
  }
  return set;
}

}  // namespace tandem::corpus
