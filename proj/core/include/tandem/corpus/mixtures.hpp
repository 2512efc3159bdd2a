// core/include/tandem/corpus/mixtures.hpp

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

#ifndef TANDEM_CORPUS_MIXTURES_HPP_
#define TANDEM_CORPUS_MIXTURES_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "tandem/corpus/manifest.hpp"
#include "tandem/signal/snr.hpp"
#include "tandem/tasks/features.hpp"

namespace tandem::corpus {

// How a noise clip is fitted to a (usually longer or shorter) clean clip.
// Loop wraps the noise circularly from a seeded offset; crop takes a seeded
// contiguous window and requires the noise to be at least clip length.
enum class NoisePolicy { kLoop, kCrop };

std::string noise_policy_name(NoisePolicy policy);
NoisePolicy parse_noise_policy(const std::string& name);  // InvalidConfig

struct MixturePlanSpec {
  double train_snr_low_db = 0.0;
  double train_snr_high_db = 25.0;
  std::vector<double> eval_snrs_db;
  std::uint64_t seed = 0;
  NoisePolicy noise_policy = NoisePolicy::kLoop;

  void validate() const;  // throws InvalidConfig
};

// Published evaluation grids. Speech tasks step down from 25 dB to 0 dB;
// acoustic scenes widen the range to -25..10 dB.
std::vector<double> eval_snrs_for(tasks::TaskKind task);
MixturePlanSpec default_plan(tasks::TaskKind task, std::uint64_t seed = 0);

struct MixtureSet {
  std::vector<signal::MixtureSample> samples;
  std::vector<std::string> warnings;
};

// One full pass over the split's clean clips at a fixed SNR. Clean-to-noise
// pairing and noise placement are pure functions of (entry id, plan seed),
// so every strategy evaluates against the identical mixture set and the
// per-SNR passes of one grid differ only in gain. Classification labels are
// indexes into clean.class_names(); transcripts ride along verbatim.
// Silent clips are skipped with a warning.
MixtureSet build_eval_mixtures_at(const Manifest& clean, const Manifest& noise,
                                  const MixturePlanSpec& plan, Split split,
                                  double snr_db);

// Train split: per-item SNR drawn uniformly from the plan's range, noise
// clip drawn uniformly, both seeded. Eval splits: the full grid, one pass
// per SNR in plan order (samples carry their snr_db tag).
MixtureSet build_mixture_set(const Manifest& clean, const Manifest& noise,
                             const MixturePlanSpec& plan, Split split);

}  // namespace tandem::corpus

#endif  // TANDEM_CORPUS_MIXTURES_HPP_
