// src/metrics/metrics.h

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

#ifndef LIDKIT_METRICS_METRICS_H_
#define LIDKIT_METRICS_METRICS_H_

#include "core/types.h"
#include "metrics/trials.h"

namespace lid {

// Average detection cost, LRE-15 pair-wise convention:
//   (1/K) sum_L [ p_target*Pmiss(L)
//                 + (1-p_target)/(K-1) * sum_{L' != L} Pfa(L, L') ].
// A trial fires when llr >= threshold (ties count as detections). Errors
// if some language has no target trials.
double Cavg(const DetectionTrialSet& trials, double p_target,
            double threshold);

// Minimum Cavg over a single shared threshold, swept over all distinct llr
// values plus a point above the maximum. Fills *best_threshold when given.
double MinCavg(const DetectionTrialSet& trials, double p_target,
               double* best_threshold = nullptr);
// Serial reference for the sweep; kept for kernel equivalence tests.
double MinCavgSerial(const DetectionTrialSet& trials, double p_target,
                     double* best_threshold = nullptr);

// Pooled one-vs-rest equal error rate in percent; linear interpolation
// between adjacent ROC operating points.
double EerPercent(const DetectionTrialSet& trials);

// Balanced multiclass log-likelihood cost in bits: softmax posteriors under
// a uniform prior, per-language averaged. Posterior clamped at 1e-300
// before the log, so the result is always finite.
double CllrBits(const ScoreMatrix& scores, const TrialLabels& labels);

// Fraction of utterances whose argmax score hits the true label; ties
// break toward the lowest language index.
double Accuracy(const ScoreMatrix& scores, const TrialLabels& labels);

}  // namespace lid

#endif  // LIDKIT_METRICS_METRICS_H_
