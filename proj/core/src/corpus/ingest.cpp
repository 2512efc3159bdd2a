// core/src/corpus/ingest.cpp

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

#include "tandem/corpus/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include "tandem/common/error.hpp"
#include "tandem/signal/wav_io.hpp"

namespace tandem::corpus {

namespace fs = std::filesystem;

namespace {

bool is_wav(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".wav";
}

std::string id_from(const fs::path& rel) {
  std::string id = rel.generic_string();
  if (const auto dot = id.rfind('.'); dot != std::string::npos)
    id.erase(dot);
  std::replace(id.begin(), id.end(), '/', '-');
  return id;
}

// Lowercase, whitespace collapsed to single spaces, trimmed. Brings sidecar
// text onto the recognizer's alphabet where the file allows it.
std::string normalize_transcript(const std::string& raw) {
  std::string out;
  bool pending_space = false;
  for (unsigned char c : raw) {
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    out += static_cast<char>(std::tolower(c));
  }
  return out;
}

}  // namespace

IngestReport ingest_corpus(const fs::path& root, LabelingRule rule) {
  if (!fs::exists(root) || !fs::is_directory(root))
    throw DataError("ingest: not a directory: " + root.string());

  IngestReport report;
  report.manifest.root = root;

  bool split_layout = false;
  for (Split s : {Split::kTrain, Split::kDev, Split::kTest})
    if (fs::is_directory(root / split_name(s))) split_layout = true;

  std::vector<fs::path> files;
  for (const auto& de : fs::recursive_directory_iterator(root))
    if (de.is_regular_file() && is_wav(de.path()))
      files.push_back(de.path().lexically_relative(root));
  std::sort(files.begin(), files.end());
  if (files.empty())
    report.warnings.push_back("no .wav files under " + root.string());

  for (const auto& rel : files) {
    Split split = Split::kTrain;
    fs::path below_split = rel;
    if (split_layout && rel.begin() != rel.end()) {
      const std::string head = rel.begin()->string();
      bool matched = false;
      for (Split s : {Split::kTrain, Split::kDev, Split::kTest})
        if (head == split_name(s)) {
          split = s;
          matched = true;
        }
      if (!matched) {
        report.warnings.push_back(rel.generic_string() +
                                  ": outside any split directory, ignored");
        continue;
      }
      below_split = rel.lexically_relative(head);
    }

    ManifestEntry entry;
    entry.id = id_from(rel);
    entry.path = rel;
    entry.split = split;

    if (rule == LabelingRule::kDirPerClass) {
      const fs::path parent = below_split.parent_path();
      if (parent.empty()) {
        entry.label = "unlabeled";
        report.warnings.push_back(rel.generic_string() +
                                  ": no class directory, labeled 'unlabeled'");
      } else {
        entry.label = parent.filename().string();
      }
    } else {
      fs::path sidecar = root / rel;
      sidecar.replace_extension(".txt");
      std::ifstream in(sidecar);
      if (!in) {
        report.rejects.push_back(
            {rel, "missing transcript " + sidecar.filename().string()});
        continue;
      }
      std::string text((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
      entry.label = normalize_transcript(text);
      if (entry.label.empty()) {
        report.rejects.push_back({rel, "empty transcript"});
        continue;
      }
    }

    try {
      const auto w = signal::read_wav((root / rel).string());
      entry.source_rate = w.sample_rate;
      const auto out_len = std::llround(static_cast<double>(w.samples.size()) *
                                        signal::kSampleRate / w.sample_rate);
      entry.duration_s =
          static_cast<double>(out_len) / signal::kSampleRate;
    } catch (const Error& e) {
      report.rejects.push_back({rel, e.what()});
      continue;
    }
    report.manifest.entries.push_back(std::move(entry));
  }

  report.manifest.validate();
  return report;
}

}  // namespace tandem::corpus
