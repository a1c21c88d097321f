// src/core/embedding_io.cc

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

#include "core/embedding_io.h"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "base/error.h"

namespace lid {

namespace {

constexpr char kMagic[4] = {'L', 'I', 'D', 'E'};
constexpr std::uint32_t kVersion = 1;

void PutU32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t GetU32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) |
         (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

void WriteEmbeddings(const std::string& path, const EmbeddingSet& set) {
  Validate(set);
  std::ofstream out(path, std::ios::binary);
  LID_REQUIRE(out.good(), "cannot open '", path, "' for writing");
  out.write(kMagic, 4);
  PutU32(out, kVersion);
  PutU32(out, static_cast<std::uint32_t>(set.vectors.rows()));
  PutU32(out, static_cast<std::uint32_t>(set.vectors.cols()));
  for (Eigen::Index r = 0; r < set.vectors.rows(); r++) {
    for (Eigen::Index c = 0; c < set.vectors.cols(); c++) {
      float f = static_cast<float>(set.vectors(r, c));
      std::uint32_t bits;
      std::memcpy(&bits, &f, 4);
      PutU32(out, bits);
    }
  }
  LID_REQUIRE(out.good(), "write failed for '", path, "'");
}

EmbeddingSet ReadEmbeddings(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  LID_REQUIRE(in.good(), "cannot open embedding file '", path, "'");
  char magic[4];
  in.read(magic, 4);
  LID_REQUIRE(in.gcount() == 4 && std::memcmp(magic, kMagic, 4) == 0, "'",
              path, "' is not an embedding file");
  std::uint32_t version = GetU32(in);
  LID_REQUIRE(version == kVersion, "'", path,
              "': unsupported embedding file version ", version);
  std::uint32_t n = GetU32(in);
  std::uint32_t d = GetU32(in);
  LID_REQUIRE(in.good(), "'", path, "': truncated header");
  LID_REQUIRE(n >= 1 && d >= 1, "'", path, "': header claims ", n, "x", d);

  std::uint64_t want = static_cast<std::uint64_t>(n) * d * 4;
  std::vector<char> payload(want);
  in.read(payload.data(), static_cast<std::streamsize>(want));
  std::uint64_t got = static_cast<std::uint64_t>(in.gcount());
  LID_REQUIRE(got == want, "'", path, "': truncated payload, expected ", want,
              " bytes of samples, got ", got);

  EmbeddingSet set;
  set.vectors.resize(n, d);
  const unsigned char* p = reinterpret_cast<const unsigned char*>(payload.data());
  for (std::uint32_t r = 0; r < n; r++) {
    for (std::uint32_t c = 0; c < d; c++) {
      std::uint32_t bits = static_cast<std::uint32_t>(p[0]) |
                           (static_cast<std::uint32_t>(p[1]) << 8) |
                           (static_cast<std::uint32_t>(p[2]) << 16) |
                           (static_cast<std::uint32_t>(p[3]) << 24);
      p += 4;
      float f;
      std::memcpy(&f, &bits, 4);
      LID_REQUIRE(std::isfinite(f), "'", path, "': non-finite value in row ",
                  r);
      set.vectors(r, c) = static_cast<double>(f);
    }
  }
  set.ids.resize(n);
  for (std::uint32_t r = 0; r < n; r++) set.ids[r] = StrCat("#", r);
  return set;
}

void BindManifest(EmbeddingSet* set,
                  const std::vector<Utterance>& utterances) {
  LID_REQUIRE(utterances.size() == static_cast<size_t>(set->NumRows()),
              "manifest has ", utterances.size(), " utterances but embedding "
              "file has ", set->NumRows(), " rows");
  set->ids.clear();
  set->labels.clear();
  bool any_label = false;
  for (const auto& utt : utterances) {
    set->ids.push_back(utt.id);
    if (utt.label) any_label = true;
  }
  if (any_label) {
    for (const auto& utt : utterances) {
      LID_REQUIRE(utt.label.has_value(),
                  "utterance '", utt.id, "' is missing a label");
      set->labels.push_back(*utt.label);
    }
  }
  Validate(*set);
}

}  // namespace lid
