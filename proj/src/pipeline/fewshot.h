// src/pipeline/fewshot.h

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

#ifndef LIDKIT_PIPELINE_FEWSHOT_H_
#define LIDKIT_PIPELINE_FEWSHOT_H_

#include <string>
#include <vector>

#include "backend/backend.h"
#include "pipeline/synthetic.h"

namespace lid {

struct FewshotRow {
  int size = 0;            // enrollment utterances per language
  double eer_percent = 0;  // seed-averaged
  double c_avg = 0;        // seed-averaged actual cost
};

struct FewshotResult {
  std::vector<FewshotRow> rows;  // one per requested size, ascending input order
  std::string table;             // aligned text table
  std::string data;              // "size eer cavg" lines for log-log plots
};

// For each enrollment size s, trains the backend on the first s pool
// utterances per language and scores a held-out set of kFewshotEvalPerClass
// utterances per language; both sets come from the synthetic generator. The
// pool size is spec.per_class_count, so every size must be within it.
// Results are averaged over num_seeds independent draws.
inline constexpr int kFewshotEvalPerClass = 100;

FewshotResult RunFewshot(const SyntheticSpec& spec,
                         const std::vector<int>& sizes, int num_seeds,
                         double p_target, const BackendConfig& backend);

}  // namespace lid

#endif  // LIDKIT_PIPELINE_FEWSHOT_H_
