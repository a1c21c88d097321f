// src/pipeline/fewshot.cc

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

#include "pipeline/fewshot.h"

#include <cstdio>

#include "base/error.h"
#include "base/rng.h"
#include "metrics/report.h"

namespace lid {

namespace {

// First `size` rows of each class block. GenerateSynthetic emits classes as
// contiguous equally sized blocks, which this exploits.
EmbeddingSet SubsetPerClass(const EmbeddingSet& pool, int n_classes,
                            int per_class, int size) {
  EmbeddingSet out;
  out.vectors.resize(static_cast<std::int64_t>(n_classes) * size, pool.Dim());
  std::int64_t row = 0;
  for (int k = 0; k < n_classes; ++k) {
    for (int i = 0; i < size; ++i, ++row) {
      std::int64_t src = static_cast<std::int64_t>(k) * per_class + i;
      out.vectors.row(row) = pool.vectors.row(src);
      out.ids.push_back(pool.ids[src]);
      out.labels.push_back(pool.labels[src]);
    }
  }
  return out;
}

TrialLabels LabelsOf(const EmbeddingSet& set) {
  TrialLabels labels;
  labels.ids = set.ids;
  labels.true_lang = set.labels;
  return labels;
}

}  // namespace

FewshotResult RunFewshot(const SyntheticSpec& spec,
                         const std::vector<int>& sizes, int num_seeds,
                         double p_target, const BackendConfig& backend) {
  LID_REQUIRE(!sizes.empty(), "no enrollment sizes given");
  for (int s : sizes) {
    LID_REQUIRE(s >= 1, "enrollment size must be >= 1, got " +
                            std::to_string(s));
    LID_REQUIRE(s <= spec.per_class_count,
                "enrollment size " + std::to_string(s) +
                    " exceeds the generated pool of " +
                    std::to_string(spec.per_class_count) + " per language");
  }
  LID_REQUIRE(num_seeds >= 1, "num_seeds must be >= 1");
  LID_REQUIRE(spec.per_class_counts.empty(),
              "few-shot experiments use a uniform per_class_count pool");

  FewshotResult result;
  result.rows.resize(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) result.rows[i].size = sizes[i];

  for (int rep = 0; rep < num_seeds; ++rep) {
    SyntheticSpec train_spec = spec;
    train_spec.seed = DeriveSeed(spec.seed, "rep" + std::to_string(rep));
    SyntheticSpec eval_spec = train_spec;
    eval_spec.per_class_count = kFewshotEvalPerClass;

    SyntheticData pool = GenerateSynthetic(train_spec, "train");
    SyntheticData eval = GenerateSynthetic(eval_spec, "test");
    TrialLabels eval_labels = LabelsOf(eval.embeddings);

    for (std::size_t i = 0; i < sizes.size(); ++i) {
      EmbeddingSet train = SubsetPerClass(pool.embeddings, spec.n_languages,
                                          spec.per_class_count, sizes[i]);
      BackendTraining trained = TrainBackend(train, pool.languages, backend);
      ScoreMatrix scores = Score(trained.model, eval.embeddings);
      MetricReport report = Evaluate(scores, eval_labels, p_target);
      result.rows[i].eer_percent += report.eer_percent / num_seeds;
      result.rows[i].c_avg += report.c_avg / num_seeds;
    }
  }

  std::string table = "  size  EER%    Cavg\n";
  std::string data = "# size eer_percent cavg\n";
  for (const FewshotRow& row : result.rows) {
    char line[96];
    std::snprintf(line, sizeof(line), "%6d  %5.2f  %6.4f\n", row.size,
                  row.eer_percent, row.c_avg);
    table += line;
    std::snprintf(line, sizeof(line), "%d %.6f %.6f\n", row.size,
                  row.eer_percent, row.c_avg);
    data += line;
  }
  result.table = table;
  result.data = data;
  return result;
}

}  // namespace lid
