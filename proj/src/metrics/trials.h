// src/metrics/trials.h

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

#ifndef LIDKIT_METRICS_TRIALS_H_
#define LIDKIT_METRICS_TRIALS_H_

#include <vector>

#include "core/types.h"

namespace lid {

struct Trial {
  double llr;
  bool is_target;
};

// One-vs-rest detection trials expanded from an N x K score matrix: each
// utterance contributes 1 target trial and K-1 non-target trials, N*K
// pooled trials total.
struct DetectionTrialSet {
  int num_languages = 0;
  std::vector<Trial> pooled;
  // Per detector language L: llrs of trials whose true language is L.
  std::vector<std::vector<double>> targets;
  // nontargets[L][Lp]: llrs of detector L applied to utterances of true
  // language Lp != L (diagonal left empty).
  std::vector<std::vector<std::vector<double>>> nontargets;
};

// Converts per-utterance scores to detection log-likelihood-ratios:
//   llr[t,k] = score[t,k] - logsumexp_{j != k}(score[t,j] - log(K-1)).
// Rows align to labels by id. Requires K >= 2 and 0 < p_target < 1.
DetectionTrialSet ExpandTrials(const ScoreMatrix& scores,
                               const TrialLabels& labels, double p_target);

}  // namespace lid

#endif  // LIDKIT_METRICS_TRIALS_H_
