// core/include/tandem/corpus/manifest.hpp

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

#ifndef TANDEM_CORPUS_MANIFEST_HPP_
#define TANDEM_CORPUS_MANIFEST_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "tandem/signal/waveform.hpp"

namespace tandem::corpus {

enum class Split { kTrain, kDev, kTest };

std::string split_name(Split split);
Split parse_split(const std::string& name);  // throws InvalidConfig

// One catalogued clip. `label` holds a class name for classification corpora
// and a transcript for speech recognition. `duration_s` is measured at the
// internal 16 kHz rate; `source_rate` is the file's native rate, so anything
// other than 16000 marks the clip resample-needed.
struct ManifestEntry {
  std::string id;
  std::filesystem::path path;  // relative paths resolve against Manifest.root
  std::string label;
  Split split = Split::kTrain;
  double duration_s = 0.0;
  int source_rate = signal::kSampleRate;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
  std::filesystem::path root;

  // Ids must be unique; with one entry per id, no clip can sit in two splits.
  void validate() const;  // throws InvalidInput

  std::vector<const ManifestEntry*> split(Split split) const;
  std::filesystem::path resolve(const ManifestEntry& entry) const;

  // Sorted unique labels across all splits. Class ids everywhere in the
  // framework are indexes into this list, so they are stable across splits.
  std::vector<std::string> class_names() const;
  int class_id(const std::string& label) const;  // throws InvalidInput
};

// Line-delimited UTF-8 records, one JSON object per entry. Paths under the
// manifest's directory are stored relative so trees stay relocatable.
void save_manifest(const Manifest& manifest, const std::filesystem::path& file);

// Loads and validates; every referenced audio path must resolve to an
// existing file (DataError otherwise).
Manifest load_manifest(const std::filesystem::path& file);

// Reads the clip behind an entry as 16 kHz mono, downmixing and resampling
// as needed.
signal::Waveform load_entry(const Manifest& manifest,
                            const ManifestEntry& entry);

}  // namespace tandem::corpus

#endif  // TANDEM_CORPUS_MANIFEST_HPP_
