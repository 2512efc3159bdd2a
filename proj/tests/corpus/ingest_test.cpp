// tests/corpus/ingest_test.cpp

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

#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "tandem/corpus/ingest.hpp"
#include "tandem/signal/wav_io.hpp"
#include "temp_dir.hpp"

namespace {

using tandem::corpus::ingest_corpus;
using tandem::corpus::LabelingRule;
using tandem::corpus::load_entry;
using tandem::corpus::Split;
using tandem::signal::Waveform;
using tandem::testing::TempDir;

namespace fs = std::filesystem;

Waveform sine(int length, double freq) {
  Waveform w;
  w.samples.resize(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i)
    w.samples[static_cast<std::size_t>(i)] =
        0.4 * std::sin(2.0 * M_PI * freq * i);
  return w;
}

void put_le(std::ofstream& out, std::uint32_t v, int bytes) {
  for (int i = 0; i < bytes; ++i)
    out.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

// Minimal PCM16 writer for fixtures the library itself never produces:
// arbitrary rate, arbitrary channel count, interleaved frames.
void write_pcm(const fs::path& path, const std::vector<std::int16_t>& frames,
               int rate, int channels) {
  std::ofstream out(path, std::ios::binary);
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(frames.size()) * 2;
  out.write("RIFF", 4);
  put_le(out, 36 + data_bytes, 4);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  put_le(out, 16, 4);
  put_le(out, 1, 2);  // PCM
  put_le(out, static_cast<std::uint32_t>(channels), 2);
  put_le(out, static_cast<std::uint32_t>(rate), 4);
  put_le(out, static_cast<std::uint32_t>(rate * channels * 2), 4);
  put_le(out, static_cast<std::uint32_t>(channels * 2), 2);
  put_le(out, 16, 2);
  out.write("data", 4);
  put_le(out, data_bytes, 4);
  for (std::int16_t s : frames) put_le(out, static_cast<std::uint16_t>(s), 2);
}

TEST_CASE("directory-per-class labels come from directory names") {
  TempDir dir("ingest-classes");
  fs::create_directories(dir.path / "dog");
  fs::create_directories(dir.path / "cat");
  tandem::signal::write_wav((dir.path / "dog" / "d1.wav").string(),
                            sine(1600, 0.05));
  tandem::signal::write_wav((dir.path / "dog" / "d2.wav").string(),
                            sine(1600, 0.06));
  tandem::signal::write_wav((dir.path / "cat" / "c1.wav").string(),
                            sine(1600, 0.07));

  const auto report = ingest_corpus(dir.path, LabelingRule::kDirPerClass);
  CHECK(report.rejects.empty());
  REQUIRE(report.manifest.entries.size() == 3);
  // Ids are sorted, so the catalogue never depends on readdir order.
  CHECK(report.manifest.entries[0].id == "cat-c1");
  CHECK(report.manifest.entries[0].label == "cat");
  CHECK(report.manifest.entries[1].id == "dog-d1");
  CHECK(report.manifest.entries[1].label == "dog");
  CHECK(report.manifest.entries[2].label == "dog");
  for (const auto& e : report.manifest.entries) {
    CHECK(e.split == Split::kTrain);
    CHECK(e.source_rate == 16000);
    CHECK(e.duration_s == 0.1);
  }
}

TEST_CASE("top-level split directories map to splits") {
  TempDir dir("ingest-splits");
  fs::create_directories(dir.path / "train" / "dog");
  fs::create_directories(dir.path / "test" / "dog");
  tandem::signal::write_wav((dir.path / "train" / "dog" / "a.wav").string(),
                            sine(1600, 0.05));
  tandem::signal::write_wav((dir.path / "test" / "dog" / "b.wav").string(),
                            sine(1600, 0.05));
  fs::create_directories(dir.path / "extra");
  tandem::signal::write_wav((dir.path / "extra" / "c.wav").string(),
                            sine(1600, 0.05));

  const auto report = ingest_corpus(dir.path, LabelingRule::kDirPerClass);
  REQUIRE(report.manifest.entries.size() == 2);
  CHECK(report.manifest.entries[0].split == Split::kTest);
  CHECK(report.manifest.entries[1].split == Split::kTrain);
  for (const auto& e : report.manifest.entries) CHECK(e.label == "dog");
  REQUIRE(report.warnings.size() == 1);  // the stray extra/c.wav
  CHECK(report.warnings[0].find("extra/c.wav") != std::string::npos);
}

TEST_CASE("a 44.1 kHz stereo file is recorded and loads as 16 kHz mono") {
  TempDir dir("ingest-stereo");
  fs::create_directories(dir.path / "music");
  const int frames = 44100;  // one second
  std::vector<std::int16_t> pcm;
  for (int i = 0; i < frames; ++i) {
    const auto v = static_cast<std::int16_t>(
        12000 * std::sin(2.0 * M_PI * 440.0 * i / 44100.0));
    pcm.push_back(v);   // left
    pcm.push_back(-v);  // right differs, downmix must average
  }
  write_pcm(dir.path / "music" / "tone.wav", pcm, 44100, 2);

  const auto report = ingest_corpus(dir.path, LabelingRule::kDirPerClass);
  CHECK(report.rejects.empty());
  REQUIRE(report.manifest.entries.size() == 1);
  const auto& e = report.manifest.entries[0];
  CHECK(e.source_rate == 44100);  // resample-needed marker

  const auto w = load_entry(report.manifest, e);
  CHECK(w.sample_rate == 16000);
  const auto expect =
      std::llround(static_cast<double>(frames) * 16000.0 / 44100.0);
  CHECK(w.samples.size() == static_cast<std::size_t>(expect));
  CHECK(e.duration_s == doctest::Approx(static_cast<double>(expect) / 16000.0)
                            .epsilon(1e-12));
  // Opposite-phase channels cancel in the mono average.
  double peak = 0.0;
  for (double v : w.samples) peak = std::max(peak, std::abs(v));
  CHECK(peak < 1e-3);
}

TEST_CASE("corrupt files land in the rejects report") {
  TempDir dir("ingest-corrupt");
  fs::create_directories(dir.path / "dog");
  tandem::signal::write_wav((dir.path / "dog" / "ok.wav").string(),
                            sine(1600, 0.05));
  std::ofstream bad(dir.path / "dog" / "bad.wav", std::ios::binary);
  bad << "this is not a riff file";
  bad.close();

  const auto report = ingest_corpus(dir.path, LabelingRule::kDirPerClass);
  REQUIRE(report.manifest.entries.size() == 1);
  CHECK(report.manifest.entries[0].id == "dog-ok");
  REQUIRE(report.rejects.size() == 1);
  CHECK(report.rejects[0].path == fs::path("dog/bad.wav"));
  CHECK_FALSE(report.rejects[0].reason.empty());
}

TEST_CASE("an empty tree gives an empty manifest and a warning") {
  TempDir dir("ingest-empty");
  const auto report = ingest_corpus(dir.path, LabelingRule::kDirPerClass);
  CHECK(report.manifest.entries.empty());
  CHECK(report.rejects.empty());
  REQUIRE(report.warnings.size() == 1);
  CHECK(report.warnings[0].find("no .wav files") != std::string::npos);
}

TEST_CASE("sidecar transcripts are read and normalized") {
  TempDir dir("ingest-sidecar");
  tandem::signal::write_wav((dir.path / "u1.wav").string(), sine(1600, 0.05));
  std::ofstream(dir.path / "u1.txt") << "  Hello   WORLD \n";
  tandem::signal::write_wav((dir.path / "u2.wav").string(), sine(1600, 0.06));

  const auto report = ingest_corpus(dir.path, LabelingRule::kSidecarTranscript);
  REQUIRE(report.manifest.entries.size() == 1);
  CHECK(report.manifest.entries[0].label == "hello world");
  REQUIRE(report.rejects.size() == 1);
  CHECK(report.rejects[0].path == fs::path("u2.wav"));
  CHECK(report.rejects[0].reason.find("missing transcript") !=
        std::string::npos);
}

}  // namespace
