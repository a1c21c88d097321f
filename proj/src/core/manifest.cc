// src/core/manifest.cc

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

#include "core/manifest.h"

#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "base/error.h"

namespace lid {

using nlohmann::json;

std::vector<Utterance> ReadManifest(const std::string& path,
                                    const LanguageList& languages) {
  std::ifstream in(path);
  LID_REQUIRE(in.good(), "cannot open manifest '", path, "'");

  std::vector<Utterance> out;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    line_no++;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      Die("manifest '", path, "' line ", line_no, ": malformed JSON: ",
          e.what());
    }
    LID_REQUIRE(j.is_object(), "manifest '", path, "' line ", line_no,
                ": expected a JSON object");
    LID_REQUIRE(j.contains("id") && j["id"].is_string(), "manifest '", path,
                "' line ", line_no, ": missing string field 'id'");
    Utterance utt;
    utt.id = j["id"].get<std::string>();
    LID_REQUIRE(seen_ids.insert(utt.id).second, "manifest '", path, "' line ",
                line_no, ": duplicate id '", utt.id, "'");
    if (j.contains("audio")) {
      LID_REQUIRE(j["audio"].is_string(), "manifest '", path, "' line ",
                  line_no, ": field 'audio' must be a string");
      utt.audio_path = j["audio"].get<std::string>();
    }
    if (j.contains("label")) {
      LID_REQUIRE(j["label"].is_string(), "manifest '", path, "' line ",
                  line_no, ": field 'label' must be a string");
      std::string label = j["label"].get<std::string>();
      int idx = languages.IndexOf(label);
      LID_REQUIRE(idx >= 0, "manifest '", path, "' line ", line_no,
                  ": unknown label '", label, "'");
      utt.label = idx;
    }
    if (j.contains("duration")) {
      LID_REQUIRE(j["duration"].is_number(), "manifest '", path, "' line ",
                  line_no, ": field 'duration' must be a number");
      utt.duration_s = j["duration"].get<double>();
    }
    for (auto it = j.begin(); it != j.end(); ++it)
      LID_REQUIRE(it.key() == "id" || it.key() == "audio" ||
                      it.key() == "label" || it.key() == "duration",
                  "manifest '", path, "' line ", line_no, ": unknown field '",
                  it.key(), "'");
    out.push_back(std::move(utt));
  }
  LID_REQUIRE(!out.empty(), "empty manifest '", path, "'");
  return out;
}

void WriteManifest(const std::string& path,
                   const std::vector<Utterance>& utterances,
                   const LanguageList& languages) {
  std::ofstream out(path);
  LID_REQUIRE(out.good(), "cannot open '", path, "' for writing");
  for (const auto& utt : utterances) {
    json j;
    j["id"] = utt.id;
    if (utt.audio_path) j["audio"] = *utt.audio_path;
    if (utt.label) j["label"] = languages.Name(*utt.label);
    if (utt.duration_s) j["duration"] = *utt.duration_s;
    out << j.dump() << "\n";
  }
  LID_REQUIRE(out.good(), "write failed for '", path, "'");
}

TrialLabels LabelsFromManifest(const std::vector<Utterance>& utterances) {
  TrialLabels labels;
  for (const auto& utt : utterances) {
    if (!utt.label) continue;
    labels.ids.push_back(utt.id);
    labels.true_lang.push_back(*utt.label);
  }
  return labels;
}

}  // namespace lid
