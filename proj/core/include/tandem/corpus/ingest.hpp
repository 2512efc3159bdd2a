// core/include/tandem/corpus/ingest.hpp

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

#ifndef TANDEM_CORPUS_INGEST_HPP_
#define TANDEM_CORPUS_INGEST_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "tandem/corpus/manifest.hpp"

namespace tandem::corpus {

// How labels attach to clips. Directory-per-class reads the label from the
// WAV's parent directory name; sidecar transcripts read it from a .txt file
// next to the WAV (lowercased, whitespace collapsed).
enum class LabelingRule { kDirPerClass, kSidecarTranscript };

struct RejectedFile {
  std::filesystem::path path;
  std::string reason;
};

// Unreadable or unlabeled files land in `rejects`; oddities that are not
// fatal (an empty tree, clips outside any class directory) in `warnings`.
struct IngestReport {
  Manifest manifest;
  std::vector<RejectedFile> rejects;
  std::vector<std::string> warnings;
};

// Catalogues every .wav under root. Top-level train/dev/test directories
// map to splits; without them everything is train. Entries are ordered by
// id, so the manifest is a pure function of the tree's contents. Native
// sample rates and channel counts are recorded, not converted; load_entry
// performs the downmix and 16 kHz resample.
IngestReport ingest_corpus(const std::filesystem::path& root,
                           LabelingRule rule);

}  // namespace tandem::corpus

#endif  // TANDEM_CORPUS_INGEST_HPP_
