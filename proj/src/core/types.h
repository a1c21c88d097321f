// src/core/types.h

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

#ifndef LIDKIT_CORE_TYPES_H_
#define LIDKIT_CORE_TYPES_H_

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace lid {

// Canonical ordered list of language identifiers. The order fixes the score
// column layout everywhere downstream, so it is validated once on
// construction and never reordered.
class LanguageList {
 public:
  LanguageList() = default;
  explicit LanguageList(std::vector<std::string> names);

  int Size() const { return static_cast<int>(names_.size()); }
  const std::string& Name(int index) const { return names_.at(index); }
  const std::vector<std::string>& Names() const { return names_; }
  // -1 if not present.
  int IndexOf(const std::string& name) const;
  bool operator==(const LanguageList& other) const {
    return names_ == other.names_;
  }

 private:
  std::vector<std::string> names_;
};

struct Utterance {
  std::string id;
  std::optional<std::string> audio_path;
  std::optional<int> label;  // index into a LanguageList
  std::optional<double> duration_s;
};

// N utterance embeddings of dimension D. Rows align with ids.
struct EmbeddingSet {
  std::vector<std::string> ids;
  Eigen::MatrixXd vectors;          // N x D
  std::vector<int> labels;          // empty, or length N
  bool HasLabels() const { return !labels.empty(); }
  int NumRows() const { return static_cast<int>(vectors.rows()); }
  int Dim() const { return static_cast<int>(vectors.cols()); }
};

// N x K per-language scores on the natural-log likelihood scale; columns
// follow the language list order.
struct ScoreMatrix {
  std::vector<std::string> ids;
  Eigen::MatrixXd values;  // N x K
  LanguageList languages;
  int NumRows() const { return static_cast<int>(values.rows()); }
  int NumLanguages() const { return languages.Size(); }
};

// True-language labels keyed by utterance id. Alignment with a ScoreMatrix
// is always by id, never by position.
struct TrialLabels {
  std::vector<std::string> ids;
  std::vector<int> true_lang;
};

// Throwing validators for the invariants above.
void Validate(const EmbeddingSet& set);
void Validate(const ScoreMatrix& scores);
void Validate(const TrialLabels& labels, int num_languages);

// Positional index of each scores.id in labels (error on any unmatched id).
std::vector<int> AlignByIds(const std::vector<std::string>& score_ids,
                            const TrialLabels& labels);

}  // namespace lid

#endif  // LIDKIT_CORE_TYPES_H_
