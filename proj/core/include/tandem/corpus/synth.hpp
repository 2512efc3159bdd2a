// core/include/tandem/corpus/synth.hpp

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

// Self-contained synthetic corpora. Classes are realized as parameterized
// acoustic archetypes with per-item jitter: harmonic tone complexes (keyword
// stand-ins), AM-FM carriers (emotional speech stand-ins), and band-filtered
// noise textures (scene stand-ins). Recognition items concatenate per-letter
// tone segments, so the ground-truth transcript is exact by construction.
// Everything is a pure function of (task, size, seed): the same call writes
// byte-identical WAVs and manifest.

#ifndef TANDEM_CORPUS_SYNTH_HPP_
#define TANDEM_CORPUS_SYNTH_HPP_

#include <cstdint>
#include <filesystem>

#include "tandem/corpus/manifest.hpp"
#include "tandem/tasks/features.hpp"

namespace tandem::corpus {

// Item counts per split. For classification tasks the counts are per class;
// for speech recognition they are totals (there are no classes to balance).
struct SynthSize {
  int train = 0;
  int dev = 0;
  int test = 0;
};

// Generates clips under out_dir/wav and writes out_dir/manifest.jsonl.
// n_classes 0 selects the task default (10 keywords, 7 emotions, 10 scenes).
// Generation is parallel over items; the manifest write is serialized.
Manifest synth_corpus(tasks::TaskKind task, const SynthSize& size,
                      std::uint64_t seed,
                      const std::filesystem::path& out_dir, int n_classes = 0);

// Noise recordings: filtered textures, sweeps, and crackle, spectrally
// unlike any class archetype. Counts are totals per split.
Manifest synth_noise(const SynthSize& size, std::uint64_t seed,
                     const std::filesystem::path& out_dir);

}  // namespace tandem::corpus

#endif  // TANDEM_CORPUS_SYNTH_HPP_
