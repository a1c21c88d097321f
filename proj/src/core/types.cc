// src/core/types.cc

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

#include "core/types.h"

#include <unordered_map>
#include <unordered_set>

#include "base/error.h"

namespace lid {

LanguageList::LanguageList(std::vector<std::string> names)
    : names_(std::move(names)) {
  LID_REQUIRE(!names_.empty(), "language list must be non-empty");
  std::unordered_set<std::string> seen;
  for (const auto& n : names_) {
    LID_REQUIRE(!n.empty(), "language list contains an empty name");
    LID_REQUIRE(seen.insert(n).second, "duplicate language name '", n, "'");
  }
}

int LanguageList::IndexOf(const std::string& name) const {
  for (size_t i = 0; i < names_.size(); i++)
    if (names_[i] == name) return static_cast<int>(i);
  return -1;
}

namespace {

void CheckUniqueIds(const std::vector<std::string>& ids, const char* what) {
  std::unordered_set<std::string> seen;
  for (const auto& id : ids)
    LID_REQUIRE(seen.insert(id).second, what, ": duplicate id '", id, "'");
}

}  // namespace

void Validate(const EmbeddingSet& set) {
  LID_REQUIRE(set.vectors.rows() >= 1 && set.vectors.cols() >= 1,
              "embedding set must have N >= 1 and D >= 1, got ",
              set.vectors.rows(), "x", set.vectors.cols());
  LID_REQUIRE(set.ids.size() == static_cast<size_t>(set.vectors.rows()),
              "embedding set has ", set.ids.size(), " ids for ",
              set.vectors.rows(), " rows");
  CheckUniqueIds(set.ids, "embedding set");
  for (Eigen::Index r = 0; r < set.vectors.rows(); r++)
    LID_REQUIRE(set.vectors.row(r).allFinite(),
                "embedding set: non-finite value in row ", r, " (id '",
                set.ids[r], "')");
  if (!set.labels.empty())
    LID_REQUIRE(set.labels.size() == set.ids.size(), "embedding set has ",
                set.labels.size(), " labels for ", set.ids.size(), " rows");
}

void Validate(const ScoreMatrix& scores) {
  LID_REQUIRE(scores.languages.Size() == scores.values.cols(),
              "score matrix has ", scores.values.cols(), " columns for ",
              scores.languages.Size(), " languages");
  LID_REQUIRE(scores.ids.size() == static_cast<size_t>(scores.values.rows()),
              "score matrix has ", scores.ids.size(), " ids for ",
              scores.values.rows(), " rows");
  CheckUniqueIds(scores.ids, "score matrix");
  LID_REQUIRE(scores.values.allFinite(),
              "score matrix contains non-finite entries");
}

void Validate(const TrialLabels& labels, int num_languages) {
  LID_REQUIRE(labels.ids.size() == labels.true_lang.size(), "trial labels: ",
              labels.ids.size(), " ids vs ", labels.true_lang.size(),
              " labels");
  CheckUniqueIds(labels.ids, "trial labels");
  for (size_t i = 0; i < labels.true_lang.size(); i++)
    LID_REQUIRE(labels.true_lang[i] >= 0 && labels.true_lang[i] < num_languages,
                "trial labels: label index ", labels.true_lang[i], " for id '",
                labels.ids[i], "' out of range [0, ", num_languages, ")");
}

std::vector<int> AlignByIds(const std::vector<std::string>& score_ids,
                            const TrialLabels& labels) {
  std::unordered_map<std::string, int> pos;
  pos.reserve(labels.ids.size());
  for (size_t i = 0; i < labels.ids.size(); i++)
    pos.emplace(labels.ids[i], static_cast<int>(i));
  std::vector<int> out;
  out.reserve(score_ids.size());
  for (const auto& id : score_ids) {
    auto it = pos.find(id);
    LID_REQUIRE(it != pos.end(), "id '", id, "' has no label entry");
    out.push_back(it->second);
  }
  return out;
}

}  // namespace lid
