// core/src/corpus/manifest.cpp

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

#include "tandem/corpus/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "tandem/common/error.hpp"
#include "tandem/signal/resample.hpp"
#include "tandem/signal/wav_io.hpp"

namespace tandem::corpus {

namespace fs = std::filesystem;

std::string split_name(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
  }
  throw InvalidConfig("unknown split value");
}

Split parse_split(const std::string& name) {
  for (Split s : {Split::kTrain, Split::kDev, Split::kTest})
    if (split_name(s) == name) return s;
  throw InvalidConfig("unknown split '" + name + "'");
}

void Manifest::validate() const {
  std::set<std::string> seen;
  for (const auto& e : entries) {
    if (e.id.empty()) throw InvalidInput("manifest entry with empty id");
    if (!seen.insert(e.id).second)
      throw InvalidInput("duplicate manifest id '" + e.id + "'");
    if (e.duration_s < 0.0)
      throw InvalidInput("negative duration for '" + e.id + "'");
  }
}

std::vector<const ManifestEntry*> Manifest::split(Split split) const {
  std::vector<const ManifestEntry*> out;
  for (const auto& e : entries)
    if (e.split == split) out.push_back(&e);
  return out;
}

fs::path Manifest::resolve(const ManifestEntry& entry) const {
  return entry.path.is_absolute() ? entry.path : root / entry.path;
}

std::vector<std::string> Manifest::class_names() const {
  std::set<std::string> names;
  for (const auto& e : entries) names.insert(e.label);
  return {names.begin(), names.end()};
}

int Manifest::class_id(const std::string& label) const {
  const auto names = class_names();
  const auto it = std::lower_bound(names.begin(), names.end(), label);
  if (it == names.end() || *it != label)
    throw InvalidInput("label '" + label + "' not in manifest");
  return static_cast<int>(it - names.begin());
}

void save_manifest(const Manifest& manifest, const fs::path& file) {
  const fs::path dir = file.has_parent_path() ? file.parent_path() : ".";
  std::ofstream out(file);
  if (!out) throw DataError("cannot write manifest " + file.string());
  for (const auto& e : manifest.entries) {
    fs::path stored = manifest.resolve(e);
    const auto rel = stored.lexically_proximate(dir);
    if (!rel.empty() && rel.native().rfind("..", 0) != 0) stored = rel;
    nlohmann::json j;
    j["id"] = e.id;
    j["path"] = stored.generic_string();
    j["label"] = e.label;
    j["split"] = split_name(e.split);
    j["duration"] = e.duration_s;
    j["source_rate"] = e.source_rate;
    out << j.dump() << '\n';
  }
  if (!out) throw DataError("short write on manifest " + file.string());
}

Manifest load_manifest(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot read manifest " + file.string());
  Manifest m;
  m.root = file.has_parent_path() ? file.parent_path() : ".";
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError("manifest " + file.string() + " line " +
                      std::to_string(lineno) + ": " + e.what());
    }
    ManifestEntry e;
    try {
      e.id = j.at("id").get<std::string>();
      e.path = fs::path(j.at("path").get<std::string>());
      e.label = j.at("label").get<std::string>();
      e.split = parse_split(j.at("split").get<std::string>());
      e.duration_s = j.at("duration").get<double>();
      e.source_rate = j.value("source_rate", signal::kSampleRate);
    } catch (const nlohmann::json::exception& ex) {
      throw DataError("manifest " + file.string() + " line " +
                      std::to_string(lineno) + ": " + ex.what());
    }
    m.entries.push_back(std::move(e));
  }
  m.validate();
  for (const auto& e : m.entries) {
    if (!fs::exists(m.resolve(e)))
      throw DataError("manifest " + file.string() + ": audio for '" + e.id +
                      "' missing at " + m.resolve(e).string());
  }
  return m;
}

signal::Waveform load_entry(const Manifest& manifest,
                            const ManifestEntry& entry) {
  auto w = signal::read_wav(manifest.resolve(entry).string());
  w = signal::resample_to_internal(w);
  w.source_id = entry.id;
  return w;
}

}  // namespace tandem::corpus
