// src/augment/wav_io.cc

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

#include "augment/wav_io.h"

#include <cmath>
#include <cstdint>
#include <fstream>

#include "augment/audio_ops.h"
#include "base/error.h"

namespace lid {

namespace {

uint32_t GetU32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
         static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
}

uint16_t GetU16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | p[1] << 8);
}

void PutU32(uint32_t v, std::string* out) {
  out->push_back(static_cast<char>(v & 0xff));
  out->push_back(static_cast<char>((v >> 8) & 0xff));
  out->push_back(static_cast<char>((v >> 16) & 0xff));
  out->push_back(static_cast<char>((v >> 24) & 0xff));
}

void PutU16(uint16_t v, std::string* out) {
  out->push_back(static_cast<char>(v & 0xff));
  out->push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

void Validate(const AudioBuffer& buffer) {
  LID_REQUIRE(!buffer.samples.empty(), "audio buffer is empty");
  LID_REQUIRE(buffer.sample_rate > 0, "sample rate must be positive, got ",
              buffer.sample_rate);
  for (size_t i = 0; i < buffer.samples.size(); ++i) {
    double s = buffer.samples[i];
    LID_REQUIRE(std::isfinite(s) && s >= -1.0 && s <= 1.0,
                "sample ", i, " = ", s, " is outside [-1, 1]");
  }
}

AudioBuffer ReadWav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  LID_REQUIRE(in.good(), "cannot open '", path, "' for reading");
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  const unsigned char* p = reinterpret_cast<const unsigned char*>(bytes.data());
  LID_REQUIRE(bytes.size() >= 12 && bytes.compare(0, 4, "RIFF") == 0 &&
                  bytes.compare(8, 4, "WAVE") == 0,
              "'", path, "' is not a RIFF WAV file");

  bool have_fmt = false;
  uint16_t channels = 0, bits = 0, format = 0;
  uint32_t rate = 0;
  AudioBuffer buffer;
  bool have_data = false;

  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    std::string chunk_id = bytes.substr(pos, 4);
    uint32_t chunk_size = GetU32(p + pos + 4);
    size_t body = pos + 8;
    LID_REQUIRE(body + chunk_size <= bytes.size(), "'", path,
                "' chunk '", chunk_id, "' overruns the file");
    if (chunk_id == "fmt ") {
      LID_REQUIRE(chunk_size >= 16, "'", path, "' fmt chunk too small");
      format = GetU16(p + body);
      channels = GetU16(p + body + 2);
      rate = GetU32(p + body + 4);
      bits = GetU16(p + body + 14);
      have_fmt = true;
    } else if (chunk_id == "data") {
      LID_REQUIRE(have_fmt, "'", path, "' has a data chunk before fmt");
      LID_REQUIRE(format == 1, "'", path, "' has format tag ", format,
                  "; only PCM (1) is supported");
      LID_REQUIRE(channels == 1, "'", path, "' has ", channels,
                  " channels; only mono is supported");
      LID_REQUIRE(bits == 16, "'", path, "' has ", bits,
                  " bits per sample; only 16 is supported");
      size_t n = chunk_size / 2;
      buffer.samples.resize(n);
      for (size_t i = 0; i < n; ++i) {
        int16_t s = static_cast<int16_t>(GetU16(p + body + 2 * i));
        buffer.samples[i] = static_cast<double>(s) / 32768.0;
      }
      buffer.sample_rate = static_cast<int>(rate);
      have_data = true;
    }
    // Chunks are word-aligned; odd sizes carry a pad byte.
    pos = body + chunk_size + (chunk_size & 1);
  }
  LID_REQUIRE(have_data, "'", path, "' has no data chunk");
  Validate(buffer);
  return buffer;
}

AudioBuffer LoadWav(const std::string& path, int target_rate) {
  LID_REQUIRE(target_rate > 0, "target rate must be positive");
  AudioBuffer buffer = ReadWav(path);
  if (buffer.sample_rate == target_rate) return buffer;
  return ResampleRate(buffer, target_rate);
}

void WriteWav(const std::string& path, const AudioBuffer& buffer) {
  Validate(buffer);
  const uint32_t data_size = static_cast<uint32_t>(buffer.samples.size() * 2);
  std::string out;
  out.reserve(44 + data_size);
  out += "RIFF";
  PutU32(36 + data_size, &out);
  out += "WAVEfmt ";
  PutU32(16, &out);
  PutU16(1, &out);  // PCM
  PutU16(1, &out);  // mono
  PutU32(static_cast<uint32_t>(buffer.sample_rate), &out);
  PutU32(static_cast<uint32_t>(buffer.sample_rate) * 2, &out);  // byte rate
  PutU16(2, &out);   // block align
  PutU16(16, &out);  // bits per sample
  out += "data";
  PutU32(data_size, &out);
  for (double s : buffer.samples) {
    long v = std::lround(s * 32768.0);
    if (v > 32767) v = 32767;
    if (v < -32768) v = -32768;
    PutU16(static_cast<uint16_t>(static_cast<int16_t>(v)), &out);
  }
  std::ofstream of(path, std::ios::binary | std::ios::trunc);
  LID_REQUIRE(of.good(), "cannot open '", path, "' for writing");
  of.write(out.data(), static_cast<std::streamsize>(out.size()));
  LID_REQUIRE(of.good(), "failed while writing '", path, "'");
}

}  // namespace lid
