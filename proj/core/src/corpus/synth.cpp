// core/src/corpus/synth.cpp

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

#include "tandem/corpus/synth.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "tandem/common/error.hpp"
#include "tandem/common/rng.hpp"
#include "tandem/signal/wav_io.hpp"
#include "tandem/tasks/models.hpp"

namespace tandem::corpus {

namespace fs = std::filesystem;
using signal::kSampleRate;
using signal::Waveform;

namespace {

constexpr double kTau = 2.0 * M_PI;

// Raised-cosine fade over the first and last `ramp` samples; keeps clip
// boundaries click-free so mixtures never carry synthesis artifacts.
void fade(Waveform& w, int ramp) {
  const int n = static_cast<int>(w.samples.size());
  ramp = std::min(ramp, n / 2);
  for (int i = 0; i < ramp; ++i) {
    const double g = 0.5 - 0.5 * std::cos(M_PI * i / ramp);
    w.samples[static_cast<std::size_t>(i)] *= g;
    w.samples[static_cast<std::size_t>(n - 1 - i)] *= g;
  }
}

void add_noise_floor(Waveform& w, Rng& rng, double amp) {
  for (auto& s : w.samples) s += amp * rng.normal();
}

// Keyword stand-in: a one-second harmonic complex. Neighboring classes
// differ in fundamental (sixth-octave steps) and in timbre (even classes get
// the full harmonic stack, odd classes only odd harmonics), so the raw-wave
// classifier has two independent cues.
Waveform render_scr(int cls, Rng& rng) {
  const int n = kSampleRate;
  const double f0 = 170.0 * std::pow(2.0, cls / 6.0) * rng.uniform(0.99, 1.01);
  const double rolloff = rng.uniform(0.55, 0.7);
  const bool odd_only = cls % 2 == 1;
  std::vector<int> harmonics =
      odd_only ? std::vector<int>{1, 3, 5} : std::vector<int>{1, 2, 3, 4};
  std::vector<double> amps, phases;
  double total = 0.0;
  for (std::size_t h = 0; h < harmonics.size(); ++h) {
    amps.push_back(std::pow(rolloff, static_cast<double>(h)) *
                   rng.uniform(0.9, 1.1));
    phases.push_back(rng.uniform(0.0, kTau));
    total += amps.back();
  }
  const double gain = rng.uniform(0.25, 0.35) / total;
  Waveform w;
  w.samples.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / kSampleRate;
    double v = 0.0;
    for (std::size_t h = 0; h < harmonics.size(); ++h)
      v += amps[h] * std::sin(kTau * f0 * harmonics[h] * t + phases[h]);
    w.samples[static_cast<std::size_t>(i)] = gain * v;
  }
  fade(w, static_cast<int>(rng.uniform(160.0, 800.0)));
  add_noise_floor(w, rng, 0.002);
  return w;
}

// Emotion stand-in: an AM-FM carrier whose modulation character encodes the
// class. Length varies between one and four seconds.
Waveform render_ser(int cls, Rng& rng) {
  const int n = kSampleRate + static_cast<int>(rng.below(3 * kSampleRate + 1));
  const double fc = (240.0 + 70.0 * cls) * rng.uniform(0.98, 1.02);
  const double fm_rate = 2.0 + 1.4 * cls + rng.uniform(-0.2, 0.2);
  const double fm_depth = 25.0 + 6.0 * cls;
  const double am_rate = 3.0 + 0.9 * cls + rng.uniform(-0.2, 0.2);
  const double am_depth = rng.uniform(0.4, 0.6);
  const double gain = rng.uniform(0.25, 0.35);
  Waveform w;
  w.samples.assign(static_cast<std::size_t>(n), 0.0);
  const double phi = rng.uniform(0.0, kTau);
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / kSampleRate;
    const double phase =
        kTau * fc * t + (fm_depth / fm_rate) * std::sin(kTau * fm_rate * t);
    const double env = 1.0 - am_depth * 0.5 * (1.0 + std::sin(kTau * am_rate * t));
    w.samples[static_cast<std::size_t>(i)] =
        gain * env * std::sin(phase + phi);
  }
  fade(w, 320);
  add_noise_floor(w, rng, 0.002);
  return w;
}

// Second-order resonator driven by white noise: a narrowband texture at the
// class's center frequency. Scenes are two seconds long.
Waveform render_asc(int cls, Rng& rng) {
  const int n = 2 * kSampleRate;
  const double fc = 140.0 * std::pow(2.0, cls * 0.45) * rng.uniform(0.97, 1.03);
  const double bw = fc * rng.uniform(0.12, 0.2);
  const double r = std::exp(-M_PI * bw / kSampleRate);
  const double theta = kTau * fc / kSampleRate;
  const double a1 = -2.0 * r * std::cos(theta);
  const double a2 = r * r;
  Waveform w;
  w.samples.assign(n, 0.0);
  double y1 = 0.0, y2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double y = rng.normal() - a1 * y1 - a2 * y2;
    y2 = y1;
    y1 = y;
    w.samples[static_cast<std::size_t>(i)] = y;
  }
  // Slow scene movement: a piecewise amplitude contour, then normalize.
  const int seg = kSampleRate / 4;
  double level = 1.0;
  for (int i = 0; i < n; ++i) {
    if (i % seg == 0) level = std::pow(10.0, rng.uniform(-3.0, 3.0) / 20.0);
    w.samples[static_cast<std::size_t>(i)] *= level;
  }
  const double rms = w.rms();
  const double gain = rng.uniform(0.08, 0.12) / (rms > 0.0 ? rms : 1.0);
  for (auto& s : w.samples) s *= gain;
  fade(w, 320);
  return w;
}

// Letters render as fixed-frequency tone segments, words as letter chains
// with short gaps, so the transcript is exact by construction.
constexpr int kLetterSamples = 1200;
constexpr int kLetterGap = 160;
constexpr int kWordGap = 900;

const std::vector<std::string>& lexicon() {
  static const std::vector<std::string> kWords = {
      "ash", "bell", "cove", "drum", "echo",
      "fern", "gale", "hill", "iron", "jade"};
  return kWords;
}

void append_letter(Waveform& w, char c, Rng& rng) {
  const int id = tasks::encode_transcript(std::string(1, c)).front();
  const double f = (300.0 + 55.0 * (id - 1)) * rng.uniform(0.995, 1.005);
  const double gain = rng.uniform(0.28, 0.34);
  const double phi = rng.uniform(0.0, kTau);
  const std::size_t start = w.samples.size();
  w.samples.resize(start + kLetterSamples, 0.0);
  for (int i = 0; i < kLetterSamples; ++i) {
    double g = 1.0;
    if (i < 120) g = 0.5 - 0.5 * std::cos(M_PI * i / 120.0);
    if (i >= kLetterSamples - 120)
      g = 0.5 - 0.5 * std::cos(M_PI * (kLetterSamples - 1 - i) / 120.0);
    w.samples[start + static_cast<std::size_t>(i)] =
        gain * g * std::sin(kTau * f * i / kSampleRate + phi);
  }
}

Waveform render_asr(std::string* transcript, Rng& rng) {
  const int n_words = 2 + static_cast<int>(rng.below(3));
  std::string text;
  Waveform w;
  w.samples.assign(800, 0.0);
  for (int k = 0; k < n_words; ++k) {
    const auto& word = lexicon()[rng.below(lexicon().size())];
    if (k > 0) {
      text += ' ';
      w.samples.resize(w.samples.size() + kWordGap, 0.0);
    }
    text += word;
    for (std::size_t c = 0; c < word.size(); ++c) {
      if (c > 0) w.samples.resize(w.samples.size() + kLetterGap, 0.0);
      append_letter(w, word[c], rng);
    }
  }
  w.samples.resize(w.samples.size() + 800, 0.0);
  if (w.samples.size() < static_cast<std::size_t>(kSampleRate))
    w.samples.resize(kSampleRate, 0.0);
  add_noise_floor(w, rng, 0.001);
  *transcript = text;
  return w;
}

// Noise archetypes, rotated per item. Textures are broadband or sweeping,
// nothing shares the class archetypes' harmonic or narrowband structure.
Waveform render_noise(int kind, Rng& rng) {
  const int n = 5 * kSampleRate / 2;
  Waveform w;
  w.samples.assign(n, 0.0);
  switch (kind % 5) {
    case 0: {  // low rumble: one-pole lowpass on white noise
      const double a = rng.uniform(0.98, 0.995);
      double y = 0.0;
      for (int i = 0; i < n; ++i) {
        y = a * y + (1.0 - a) * rng.normal();
        w.samples[static_cast<std::size_t>(i)] = y * 8.0;
      }
      break;
    }
    case 1: {  // hiss: first difference of white noise
      double prev = 0.0;
      for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        w.samples[static_cast<std::size_t>(i)] = 0.35 * (x - prev);
        prev = x;
      }
      break;
    }
    case 2:
    case 3: {  // logarithmic sweep, rising or falling
      const double f_lo = rng.uniform(90.0, 130.0);
      const double f_hi = rng.uniform(5000.0, 6500.0);
      const double k = std::log(f_hi / f_lo);
      double phase = rng.uniform(0.0, kTau);
      for (int i = 0; i < n; ++i) {
        const double u = static_cast<double>(i) / n;
        const double pos = kind % 5 == 2 ? u : 1.0 - u;
        const double f = f_lo * std::exp(k * pos);
        phase += kTau * f / kSampleRate;
        w.samples[static_cast<std::size_t>(i)] = 0.5 * std::sin(phase);
      }
      break;
    }
    default: {  // crackle: sparse impulses through a short decay
      std::vector<double> imp(static_cast<std::size_t>(n), 0.0);
      for (int i = 0; i < n; ++i)
        if (rng.uniform() < 0.002) imp[static_cast<std::size_t>(i)] = rng.normal() * 2.0;
      double y = 0.0;
      for (int i = 0; i < n; ++i) {
        y = 0.97 * y + imp[static_cast<std::size_t>(i)];
        w.samples[static_cast<std::size_t>(i)] = y;
      }
      break;
    }
  }
  const double rms = w.rms();
  const double gain = rng.uniform(0.09, 0.11) / (rms > 0.0 ? rms : 1.0);
  for (auto& s : w.samples) s *= gain;
  fade(w, 320);
  return w;
}

struct Job {
  std::string id;
  std::string label;  // class name; empty for recognition (filled by render)
  Split split = Split::kTrain;
  int cls = 0;
  int kind = 0;  // noise archetype index
};

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(hw, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  for (auto& th : pool) th.join();
}

int default_classes(tasks::TaskKind task) {
  switch (task) {
    case tasks::TaskKind::kScr: return 10;
    case tasks::TaskKind::kSer: return 7;
    case tasks::TaskKind::kAsc: return 10;
    case tasks::TaskKind::kAsr: return 1;
  }
  throw InvalidConfig("unknown task");
}

int split_count(const SynthSize& size, Split split) {
  switch (split) {
    case Split::kTrain: return size.train;
    case Split::kDev: return size.dev;
    case Split::kTest: return size.test;
  }
  return 0;
}

std::string item_id(const std::string& stem, Split split, int cls, int idx) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%s-%s-c%02d-%04d", stem.c_str(),
                split_name(split).c_str(), cls, idx);
  return buf;
}

Manifest write_corpus(std::vector<Job> jobs, std::uint64_t seed,
                      const fs::path& out_dir, tasks::TaskKind task,
                      bool is_noise) {
  fs::create_directories(out_dir / "wav");
  Manifest m;
  m.root = out_dir;
  m.entries.resize(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    Job& job = jobs[i];
    Rng rng(derive_seed(seed, job.id));
    Waveform w;
    std::string label = job.label;
    if (is_noise) {
      w = render_noise(job.kind, rng);
    } else {
      switch (task) {
        case tasks::TaskKind::kScr: w = render_scr(job.cls, rng); break;
        case tasks::TaskKind::kSer: w = render_ser(job.cls, rng); break;
        case tasks::TaskKind::kAsc: w = render_asc(job.cls, rng); break;
        case tasks::TaskKind::kAsr: w = render_asr(&label, rng); break;
      }
    }
    const fs::path rel = fs::path("wav") / (job.id + ".wav");
    signal::write_wav((out_dir / rel).string(), w);
    ManifestEntry e;
    e.id = job.id;
    e.path = rel;
    e.label = label;
    e.split = job.split;
    e.duration_s = static_cast<double>(w.samples.size()) / kSampleRate;
    m.entries[i] = std::move(e);
  });
  m.validate();
  save_manifest(m, out_dir / "manifest.jsonl");
  return m;
}

}  // namespace

Manifest synth_corpus(tasks::TaskKind task, const SynthSize& size,
                      std::uint64_t seed, const fs::path& out_dir,
                      int n_classes) {
  if (size.train < 1) throw InvalidConfig("synth_corpus: train size < 1");
  if (size.dev < 0 || size.test < 0)
    throw InvalidConfig("synth_corpus: negative split size");
  if (n_classes == 0) n_classes = default_classes(task);
  if (task != tasks::TaskKind::kAsr && n_classes < 2)
    throw InvalidConfig("synth_corpus: need at least 2 classes");

  const std::string stem = tasks::task_name(task);
  std::vector<Job> jobs;
  for (Split split : {Split::kTrain, Split::kDev, Split::kTest}) {
    const int count = split_count(size, split);
    if (task == tasks::TaskKind::kAsr) {
      for (int i = 0; i < count; ++i)
        jobs.push_back({item_id(stem, split, 0, i), "", split, 0, 0});
    } else {
      for (int c = 0; c < n_classes; ++c)
        for (int i = 0; i < count; ++i) {
          char cls_name[16];
          std::snprintf(cls_name, sizeof(cls_name), "class%02d", c);
          jobs.push_back(
              {item_id(stem, split, c, i), cls_name, split, c, 0});
        }
    }
  }
  return write_corpus(std::move(jobs), seed, out_dir, task, false);
}

Manifest synth_noise(const SynthSize& size, std::uint64_t seed,
                     const fs::path& out_dir) {
  if (size.train < 1) throw InvalidConfig("synth_noise: train size < 1");
  if (size.dev < 0 || size.test < 0)
    throw InvalidConfig("synth_noise: negative split size");
  static const char* kKinds[5] = {"rumble", "hiss", "sweepup", "sweepdown",
                                  "crackle"};
  std::vector<Job> jobs;
  for (Split split : {Split::kTrain, Split::kDev, Split::kTest}) {
    const int count = split_count(size, split);
    for (int i = 0; i < count; ++i) {
      Job job;
      job.kind = i % 5;
      job.id = item_id(std::string("noise-") + kKinds[job.kind], split, job.kind, i);
      job.label = kKinds[job.kind];
      job.split = split;
      jobs.push_back(std::move(job));
    }
  }
  return write_corpus(std::move(jobs), seed, out_dir, tasks::TaskKind::kScr,
                      true);
}

}  // namespace tandem::corpus
