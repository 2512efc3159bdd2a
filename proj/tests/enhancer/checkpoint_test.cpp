// tests/enhancer/checkpoint_test.cpp

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

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "tandem/common/error.hpp"
#include "tandem/common/rng.hpp"
#include "tandem/enhancer/checkpoint.hpp"
#include "tandem/enhancer/unet.hpp"
#include "tandem/signal/waveform.hpp"

namespace {

namespace fs = std::filesystem;
using tandem::DataError;
using tandem::Rng;
using tandem::enhancer::Checkpoint;
using tandem::enhancer::Unet;
using tandem::enhancer::UnetConfig;
using tandem::nn::NamedBuffer;
using tandem::nn::NamedParam;
using tandem::signal::Waveform;

UnetConfig tiny_config() {
  UnetConfig cfg;
  cfg.depth = 2;
  cfg.base_channels = 2;
  cfg.convs_per_block = 1;
  cfg.stft.window_length = 64;
  cfg.stft.hop_length = 16;
  cfg.stft.fft_size = 64;
  return cfg;
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("tandem_ckpt_test_" + name);
}

Checkpoint snapshot_model(Unet& model, std::uint64_t seed) {
  std::vector<NamedParam> params;
  std::vector<NamedBuffer> buffers;
  model.collect(params, &buffers);
  return tandem::enhancer::snapshot("enhancer", R"({"depth":2})", seed,
                                    params, buffers);
}

Waveform probe_signal() {
  Rng rng(4242);
  std::vector<double> s(800);
  for (auto& v : s) v = 0.4 * rng.normal();
  return Waveform(std::move(s), "probe");
}

}  // namespace

TEST_CASE("checkpoint round trip is bit exact") {
  Unet model(tiny_config(), 7);
  const Checkpoint before = snapshot_model(model, 7);
  const fs::path path = temp_file("roundtrip.bin");
  tandem::enhancer::save_checkpoint(path, before);
  const Checkpoint after = tandem::enhancer::load_checkpoint(path);

  CHECK(after.kind == "enhancer");
  CHECK(after.seed == 7);
  CHECK(nlohmann::json::parse(after.config_json) ==
        nlohmann::json::parse(before.config_json));
  REQUIRE(after.tensors.size() == before.tensors.size());
  for (std::size_t i = 0; i < before.tensors.size(); ++i) {
    CHECK(after.tensors[i].first == before.tensors[i].first);
    const auto& ta = before.tensors[i].second;
    const auto& tb = after.tensors[i].second;
    REQUIRE(tb.same_shape(ta));
    CHECK(std::memcmp(ta.data(), tb.data(), ta.numel() * sizeof(double)) ==
          0);
  }
  fs::remove(path);
}

TEST_CASE("restore reproduces the saved model's output") {
  Unet original(tiny_config(), 7);
  const fs::path path = temp_file("restore.bin");
  tandem::enhancer::save_checkpoint(path, snapshot_model(original, 7));

  Unet copy(tiny_config(), 8888);  // different weights until restored
  std::vector<NamedParam> params;
  std::vector<NamedBuffer> buffers;
  copy.collect(params, &buffers);
  tandem::enhancer::restore(tandem::enhancer::load_checkpoint(path), params,
                            buffers);

  const Waveform probe = probe_signal();
  const Waveform a = original.enhance(probe);
  const Waveform b = copy.enhance(probe);
  REQUIRE(a.samples.size() == b.samples.size());
  CHECK(std::memcmp(a.samples.data(), b.samples.data(),
                    a.samples.size() * sizeof(double)) == 0);
  fs::remove(path);
}

TEST_CASE("restore rejects missing tensors and shape mismatches") {
  Unet model(tiny_config(), 7);
  Checkpoint ckpt = snapshot_model(model, 7);

  std::vector<NamedParam> params;
  std::vector<NamedBuffer> buffers;
  model.collect(params, &buffers);

  Checkpoint missing = ckpt;
  missing.tensors.erase(missing.tensors.begin());
  CHECK_THROWS_AS(tandem::enhancer::restore(missing, params, buffers),
                  DataError);

  Checkpoint reshaped = ckpt;
  reshaped.tensors[0].second = tandem::nn::Tensor({1, 2, 3}, 0.0);
  CHECK_THROWS_AS(tandem::enhancer::restore(reshaped, params, buffers),
                  DataError);

  CHECK(ckpt.find("enc0.c0.w") != nullptr);
  CHECK(ckpt.find("no_such_tensor") == nullptr);
}

TEST_CASE("loader rejects corrupt containers") {
  Unet model(tiny_config(), 7);
  const Checkpoint ckpt = snapshot_model(model, 7);
  const fs::path good = temp_file("good.bin");
  tandem::enhancer::save_checkpoint(good, ckpt);

  auto bytes_of = [&](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::vector<char>((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  };
  auto write_bytes = [&](const fs::path& p, const std::vector<char>& b) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(b.data(), static_cast<std::streamsize>(b.size()));
  };
  const std::vector<char> original = bytes_of(good);

  const fs::path bad = temp_file("bad.bin");

  std::vector<char> tampered = original;
  tampered[0] = 'X';
  write_bytes(bad, tampered);
  CHECK_THROWS_AS(tandem::enhancer::load_checkpoint(bad), DataError);

  tampered = original;
  tampered[8] = 99;  // format version field
  write_bytes(bad, tampered);
  CHECK_THROWS_AS(tandem::enhancer::load_checkpoint(bad), DataError);

  tampered.assign(original.begin(), original.begin() + 40);
  write_bytes(bad, tampered);
  CHECK_THROWS_AS(tandem::enhancer::load_checkpoint(bad), DataError);

  tampered.assign(original.begin(),
                  original.end() - static_cast<long>(64));
  write_bytes(bad, tampered);
  CHECK_THROWS_AS(tandem::enhancer::load_checkpoint(bad), DataError);

  CHECK_THROWS_AS(tandem::enhancer::load_checkpoint(temp_file("absent.bin")),
                  DataError);

  fs::remove(good);
  fs::remove(bad);
}
