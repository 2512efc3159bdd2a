// core/src/signal/wav_io.cpp

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

#include "tandem/signal/wav_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <vector>

#include "tandem/common/error.hpp"
#include "tandem/signal/resample.hpp"

namespace tandem::signal {
namespace {

std::uint32_t read_u32(const std::vector<unsigned char>& b, std::size_t off) {
  return static_cast<std::uint32_t>(b[off]) |
         static_cast<std::uint32_t>(b[off + 1]) << 8 |
         static_cast<std::uint32_t>(b[off + 2]) << 16 |
         static_cast<std::uint32_t>(b[off + 3]) << 24;
}

std::uint16_t read_u16(const std::vector<unsigned char>& b, std::size_t off) {
  return static_cast<std::uint16_t>(b[off] | b[off + 1] << 8);
}

bool tag_is(const std::vector<unsigned char>& b, std::size_t off,
            const char* tag) {
  return b[off] == static_cast<unsigned char>(tag[0]) &&
         b[off + 1] == static_cast<unsigned char>(tag[1]) &&
         b[off + 2] == static_cast<unsigned char>(tag[2]) &&
         b[off + 3] == static_cast<unsigned char>(tag[3]);
}

void put_u32(std::vector<unsigned char>& b, std::uint32_t v) {
  b.push_back(static_cast<unsigned char>(v & 0xff));
  b.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
  b.push_back(static_cast<unsigned char>((v >> 16) & 0xff));
  b.push_back(static_cast<unsigned char>((v >> 24) & 0xff));
}

void put_u16(std::vector<unsigned char>& b, std::uint16_t v) {
  b.push_back(static_cast<unsigned char>(v & 0xff));
  b.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
}

void put_tag(std::vector<unsigned char>& b, const char* tag) {
  for (int i = 0; i < 4; ++i)
    b.push_back(static_cast<unsigned char>(tag[i]));
}

}  // namespace

Waveform read_wav(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("read_wav: cannot open " + path);
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(is)),
                                 std::istreambuf_iterator<char>());
  if (buf.size() < 44 || !tag_is(buf, 0, "RIFF") || !tag_is(buf, 8, "WAVE"))
    throw DataError("read_wav: not a RIFF/WAVE file: " + path);

  int channels = 0;
  int sample_rate = 0;
  int bits = 0;
  int audio_format = 0;
  std::size_t data_off = 0;
  std::size_t data_len = 0;

  std::size_t off = 12;
  while (off + 8 <= buf.size()) {
    const std::uint32_t chunk_len = read_u32(buf, off + 4);
    const std::size_t body = off + 8;
    if (body + chunk_len > buf.size())
      throw DataError("read_wav: truncated chunk in " + path);
    if (tag_is(buf, off, "fmt ")) {
      if (chunk_len < 16) throw DataError("read_wav: short fmt chunk");
      audio_format = read_u16(buf, body);
      channels = read_u16(buf, body + 2);
      sample_rate = static_cast<int>(read_u32(buf, body + 4));
      bits = read_u16(buf, body + 14);
    } else if (tag_is(buf, off, "data")) {
      data_off = body;
      data_len = chunk_len;
    }
    off = body + chunk_len + (chunk_len & 1);  // chunks are word-aligned
  }

  if (audio_format != 1)
    throw DataError("read_wav: only PCM supported: " + path);
  if (bits != 16) throw DataError("read_wav: only 16-bit supported: " + path);
  if (channels != 1 && channels != 2)
    throw DataError("read_wav: unsupported channel count: " + path);
  if (sample_rate < 1) throw DataError("read_wav: bad sample rate: " + path);
  if (data_off == 0) throw DataError("read_wav: no data chunk: " + path);

  const std::size_t frame_bytes = 2 * static_cast<std::size_t>(channels);
  const std::size_t frames = data_len / frame_bytes;
  Waveform w;
  w.sample_rate = sample_rate;
  w.source_id = path;
  w.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (int c = 0; c < channels; ++c) {
      const std::size_t p = data_off + i * frame_bytes +
                            2 * static_cast<std::size_t>(c);
      const auto v = static_cast<std::int16_t>(
          static_cast<std::uint16_t>(buf[p] | buf[p + 1] << 8));
      acc += static_cast<double>(v) / 32768.0;
    }
    w.samples[i] = acc / channels;
  }
  return w;
}

Waveform read_wav_as_internal(const std::string& path) {
  return resample_to_internal(read_wav(path));
}

void write_wav(const std::string& path, const Waveform& w) {
  check_finite(w, "write_wav " + path);
  const auto frames = static_cast<std::uint32_t>(w.size());
  const std::uint32_t data_len = frames * 2;

  std::vector<unsigned char> buf;
  buf.reserve(44 + data_len);
  put_tag(buf, "RIFF");
  put_u32(buf, 36 + data_len);
  put_tag(buf, "WAVE");
  put_tag(buf, "fmt ");
  put_u32(buf, 16);
  put_u16(buf, 1);  // PCM
  put_u16(buf, 1);  // mono
  put_u32(buf, static_cast<std::uint32_t>(w.sample_rate));
  put_u32(buf, static_cast<std::uint32_t>(w.sample_rate) * 2);  // byte rate
  put_u16(buf, 2);   // block align
  put_u16(buf, 16);  // bits per sample
  put_tag(buf, "data");
  put_u32(buf, data_len);
  for (std::size_t i = 0; i < frames; ++i) {
    // Symmetric 1/32768 quantization; the clamp happens on the integer code
    // so +1.0 maps to 32767 and -1.0 to -32768 exactly.
    const long code = std::lround(w.samples[i] * 32768.0);
    const auto q = static_cast<std::int16_t>(std::clamp(code, -32768l, 32767l));
    put_u16(buf, static_cast<std::uint16_t>(q));
  }

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError("write_wav: cannot open " + path);
  os.write(reinterpret_cast<const char*>(buf.data()),
           static_cast<std::streamsize>(buf.size()));
  if (!os) throw DataError("write_wav: write failed: " + path);
}

}  // namespace tandem::signal
