// src/fusion/fusion.h

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

#ifndef LIDKIT_FUSION_FUSION_H_
#define LIDKIT_FUSION_FUSION_H_

#include <vector>

#include "core/model_io.h"
#include "core/types.h"
#include "fusion/lbfgs.h"

namespace lid {

// fused[t,k] = sum_s alphas[s] * scores_s[t,k] + betas[k].
// All systems must share ids (in order) and the language list; a mismatch
// is an error naming the offending system.
ScoreMatrix FuseScores(const FusionModel& model,
                       const std::vector<ScoreMatrix>& systems);

// Balanced multiclass Cllr (bits) of the fused scores as a function of the
// packed parameter vector [alphas (S), betas (K)], with its exact analytic
// gradient. label_ids[t] is the language index of systems[*].ids[t].
// Matches metrics CllrBits on the fused ScoreMatrix. Per-trial terms are
// computed in parallel and combined with a fixed pairwise reduction, so the
// value is independent of thread count.
double CllrObjective(const Eigen::VectorXd& params,
                     const std::vector<ScoreMatrix>& systems,
                     const std::vector<int>& label_ids,
                     Eigen::VectorXd* grad);

// Single-threaded reference for tests and benchmarks; bitwise identical to
// CllrObjective.
double CllrObjectiveSerial(const Eigen::VectorXd& params,
                           const std::vector<ScoreMatrix>& systems,
                           const std::vector<int>& label_ids,
                           Eigen::VectorXd* grad);

struct FusionTraining {
  FusionModel model;
  double initial_cllr_bits = 0.0;  // at alphas = 1/S, betas = 0
  double final_cllr_bits = 0.0;    // never exceeds the initial value
  OptStatus status = OptStatus::kConverged;
  int iterations = 0;
};

// Minimizes the dev-set Cllr over (alphas, betas) from the uniform-average
// initialization. An optimizer failure is reported through `status` with
// the best iterate found, never thrown. Labels must cover every language.
FusionTraining TrainFusion(const std::vector<ScoreMatrix>& systems,
                           const TrialLabels& labels,
                           const OptimizerConfig& config = {});

// Calibration is the single-system special case of fusion.
FusionTraining CalibrateSystem(const ScoreMatrix& system,
                               const TrialLabels& labels,
                               const OptimizerConfig& config = {});

}  // namespace lid

#endif  // LIDKIT_FUSION_FUSION_H_
