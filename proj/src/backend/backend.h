// src/backend/backend.h

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

#ifndef LIDKIT_BACKEND_BACKEND_H_
#define LIDKIT_BACKEND_BACKEND_H_

#include <string>
#include <vector>

#include "core/model_io.h"
#include "core/types.h"

namespace lid {

struct BackendConfig {
  bool use_lda = false;
  int lda_dim = 50;
  double lda_shrinkage = 1e-4;  // trace-scaled within-class regularizer
  bool rebalance = true;        // inverse-frequency class weights
  double l2_lambda = 1e-4;
  int max_iter = 500;
  double tol = 1e-7;
  // Paper-order preprocessing is normalize then center; the reverse is
  // available as an option.
  bool center_before_normalize = false;
};

struct BackendTraining {
  BackendModel model;
  bool converged = false;
  int iterations = 0;
  double final_loss = 0.0;
  std::vector<std::string> warnings;
  // Preprocessing/fitting stages in execution order, e.g. "normalize",
  // "center", "classify".
  std::vector<std::string> stages;
};

// Fits the full backend on labeled embeddings: length-normalize,
// mean-center, optional LDA, then rebalanced multinomial regression.
BackendTraining TrainBackend(const EmbeddingSet& train,
                             const LanguageList& languages,
                             const BackendConfig& config);

// Applies the trained pipeline (normalize, center, project, classify) and
// returns unnormalized log-scores, one row per utterance. Parallel over
// utterances; bitwise identical to ScoreSerial.
ScoreMatrix Score(const BackendModel& model, const EmbeddingSet& embeddings);

// Single-threaded reference used by tests and benchmarks.
ScoreMatrix ScoreSerial(const BackendModel& model,
                        const EmbeddingSet& embeddings);

}  // namespace lid

#endif  // LIDKIT_BACKEND_BACKEND_H_
