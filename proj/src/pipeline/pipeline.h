// src/pipeline/pipeline.h

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

#ifndef LIDKIT_PIPELINE_PIPELINE_H_
#define LIDKIT_PIPELINE_PIPELINE_H_

#include <string>
#include <vector>

#include "metrics/report.h"
#include "pipeline/config.h"

namespace lid {

// Embedding extraction happens upstream; the pipeline consumes manifest +
// embedding file pairs for each split.
struct PipelineInputs {
  std::string train_manifest;
  std::string train_embeddings;
  std::string dev_manifest;
  std::string dev_embeddings;
  std::string test_manifest;
  std::string test_embeddings;
};

struct PipelineResult {
  MetricReport report;                // test-set metrics, calibrated scores
  std::vector<std::string> stages;    // executed stages in order
  std::vector<std::string> warnings;
  std::vector<std::string> files;     // artifact names relative to out_dir
};

// Trains the backend on train, calibrates scores on dev, evaluates on test,
// and writes all artifacts (models, score matrices, report, file manifest)
// under out_dir. Any failure is rethrown with a "pipeline stage '<name>':"
// prefix. Deterministic: same inputs and config give byte-identical
// artifacts.
PipelineResult RunPipeline(const PipelineConfig& config,
                           const PipelineInputs& inputs,
                           const std::string& out_dir);

}  // namespace lid

#endif  // LIDKIT_PIPELINE_PIPELINE_H_
