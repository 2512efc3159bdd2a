// core/src/enhancer/checkpoint.cpp

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

#include "tandem/enhancer/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "json.hpp"
#include "tandem/common/error.hpp"

namespace tandem::enhancer {

namespace {

using json = nlohmann::json;

constexpr char kMagic[8] = {'T', 'N', 'D', 'M', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kFormatVersion = 1;

void write_u32(std::ofstream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

void write_u64(std::ofstream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t read_u32(std::ifstream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t read_u64(std::ifstream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

const nn::Tensor* Checkpoint::find(const std::string& name) const {
  for (const auto& [n, t] : tensors)
    if (n == name) return &t;
  return nullptr;
}

Checkpoint snapshot(const std::string& kind, const std::string& config_json,
                    std::uint64_t seed,
                    const std::vector<nn::NamedParam>& params,
                    const std::vector<nn::NamedBuffer>& buffers) {
  Checkpoint c;
  c.kind = kind;
  c.config_json = config_json;
  c.seed = seed;
  c.tensors.reserve(params.size() + buffers.size());
  for (const auto& p : params) c.tensors.emplace_back(p.name, p.value.value());
  for (const auto& b : buffers) c.tensors.emplace_back(b.name, *b.value);
  return c;
}

void restore(const Checkpoint& ckpt, std::vector<nn::NamedParam>& params,
             std::vector<nn::NamedBuffer>& buffers) {
  auto fetch = [&](const std::string& name,
                   const nn::Tensor& target) -> const nn::Tensor& {
    const nn::Tensor* t = ckpt.find(name);
    if (!t) throw DataError("checkpoint: missing tensor '" + name + "'");
    if (!t->same_shape(target))
      throw DataError("checkpoint: shape mismatch for '" + name + "': file " +
                      t->shape_str() + " vs model " + target.shape_str());
    return *t;
  };
  for (auto& p : params)
    p.value.mutable_value() = fetch(p.name, p.value.value());
  for (auto& b : buffers) *b.value = fetch(b.name, *b.value);
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c) {
  json manifest;
  manifest["kind"] = c.kind;
  manifest["seed"] = c.seed;
  manifest["config"] =
      c.config_json.empty() ? json::object() : json::parse(c.config_json);
  json tensors = json::array();
  for (const auto& [name, t] : c.tensors)
    tensors.push_back({{"name", name}, {"shape", t.shape()}});
  manifest["tensors"] = std::move(tensors);
  const std::string header = manifest.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("checkpoint: cannot open " + path.string());
  out.write(kMagic, sizeof(kMagic));
  write_u32(out, kFormatVersion);
  write_u64(out, header.size());
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  for (const auto& [name, t] : c.tensors) {
    (void)name;
    // Raw doubles; this toolchain targets little-endian hosts only.
    out.write(reinterpret_cast<const char*>(t.data()),
              static_cast<std::streamsize>(t.numel() * sizeof(double)));
  }
  if (!out) throw DataError("checkpoint: write failed for " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("checkpoint: cannot open " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw DataError("checkpoint: bad magic in " + path.string());
  const std::uint32_t version = read_u32(in);
  if (version != kFormatVersion)
    throw DataError("checkpoint: unsupported format version " +
                    std::to_string(version));
  const std::uint64_t header_len = read_u64(in);
  std::string header(header_len, '\0');
  in.read(header.data(), static_cast<std::streamsize>(header_len));
  if (!in) throw DataError("checkpoint: truncated header in " + path.string());

  json manifest;
  try {
    manifest = json::parse(header);
  } catch (const json::exception& e) {
    throw DataError(std::string("checkpoint: manifest parse error: ") +
                    e.what());
  }

  Checkpoint c;
  try {
    c.kind = manifest.at("kind").get<std::string>();
    c.seed = manifest.at("seed").get<std::uint64_t>();
    c.config_json = manifest.at("config").dump();
    for (const auto& entry : manifest.at("tensors")) {
      const auto name = entry.at("name").get<std::string>();
      const auto shape = entry.at("shape").get<std::vector<int>>();
      nn::Tensor t(shape);
      in.read(reinterpret_cast<char*>(t.data()),
              static_cast<std::streamsize>(t.numel() * sizeof(double)));
      if (!in)
        throw DataError("checkpoint: truncated tensor '" + name + "' in " +
                        path.string());
      c.tensors.emplace_back(name, std::move(t));
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("checkpoint: malformed manifest: ") +
                    e.what());
  }
  return c;
}

}  // namespace tandem::enhancer
