// src/fusion/fusion.cc

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

#include "fusion/fusion.h"

#include <cmath>
#include <cstdint>

#include "base/error.h"
#include "base/numeric.h"
#include "base/parallel.h"

namespace lid {

namespace {

// Same floor as the metrics module so objective values match CllrBits.
constexpr double kPosteriorFloor = 1e-300;

void CheckAligned(const std::vector<ScoreMatrix>& systems) {
  LID_REQUIRE(!systems.empty(), "fusion needs at least one system");
  Validate(systems[0]);
  for (size_t s = 1; s < systems.size(); ++s) {
    Validate(systems[s]);
    LID_REQUIRE(systems[s].languages.Names() == systems[0].languages.Names(),
                "system ", s, " language list differs from system 0");
    LID_REQUIRE(systems[s].ids.size() == systems[0].ids.size(),
                "system ", s, " has ", systems[s].ids.size(),
                " utterances but system 0 has ", systems[0].ids.size());
    for (size_t t = 0; t < systems[s].ids.size(); ++t) {
      LID_REQUIRE(systems[s].ids[t] == systems[0].ids[t],
                  "system ", s, " id mismatch at row ", t, ": '",
                  systems[s].ids[t], "' vs '", systems[0].ids[t], "'");
    }
  }
}

// Per-trial balance weights u_t = 1 / (K * N_{y_t}); sums to 1 over the
// dev set and gives every language equal total mass.
Eigen::VectorXd TrialWeights(const std::vector<int>& label_ids, int k,
                             const LanguageList& languages) {
  std::vector<int64_t> counts(k, 0);
  for (int y : label_ids) {
    LID_REQUIRE(y >= 0 && y < k, "label index ", y, " out of range");
    ++counts[y];
  }
  for (int c = 0; c < k; ++c) {
    LID_REQUIRE(counts[c] > 0, "language '", languages.Name(c),
                "' has no trials; balanced Cllr is undefined");
  }
  Eigen::VectorXd weights(label_ids.size());
  for (size_t t = 0; t < label_ids.size(); ++t) {
    weights(t) = 1.0 / (static_cast<double>(k) * counts[label_ids[t]]);
  }
  return weights;
}

double ObjectiveImpl(const Eigen::VectorXd& params,
                     const std::vector<ScoreMatrix>& systems,
                     const std::vector<int>& label_ids, Eigen::VectorXd* grad,
                     bool parallel) {
  CheckAligned(systems);
  const int num_systems = static_cast<int>(systems.size());
  const int k = systems[0].NumLanguages();
  const int64_t n = static_cast<int64_t>(systems[0].ids.size());
  LID_REQUIRE(params.size() == num_systems + k, "expected ", num_systems + k,
              " fusion parameters, got ", params.size());
  LID_REQUIRE(static_cast<int64_t>(label_ids.size()) == n,
              "got ", label_ids.size(), " labels for ", n, " trials");

  const Eigen::VectorXd alphas = params.head(num_systems);
  const Eigen::VectorXd betas = params.tail(k);
  const Eigen::VectorXd trial_w =
      TrialWeights(label_ids, k, systems[0].languages);

  // Column 0 holds the per-trial loss term, columns 1..S the alpha
  // contributions, the rest the beta contributions. Each column is reduced
  // with PairwiseSum, so results do not depend on the thread partition.
  const int num_cols = 1 + num_systems + k;
  Eigen::MatrixXd terms(n, num_cols);
  auto body = [&](int64_t t) {
    Eigen::VectorXd z = betas;
    for (int s = 0; s < num_systems; ++s) {
      z += alphas(s) * systems[s].values.row(t).transpose();
    }
    const int y = label_ids[t];
    const double lse = LogSumExp(z);
    const double posterior = std::exp(z(y) - lse);
    terms(t, 0) =
        trial_w(t) * (-std::log2(std::max(posterior, kPosteriorFloor)));
    // d(-log2 p_y)/dz = (softmax(z) - e_y) / ln 2.
    Eigen::VectorXd residual = (z.array() - lse).exp();
    residual(y) -= 1.0;
    residual *= trial_w(t) / kLn2;
    for (int s = 0; s < num_systems; ++s) {
      terms(t, 1 + s) = residual.dot(systems[s].values.row(t));
    }
    terms.row(t).tail(k) = residual.transpose();
  };
  if (parallel) {
    ParallelFor(n, body);
  } else {
    for (int64_t t = 0; t < n; ++t) body(t);
  }

  if (grad != nullptr) {
    grad->resize(params.size());
    for (int j = 0; j < num_systems + k; ++j) {
      (*grad)(j) = PairwiseSum(terms.col(1 + j).data(), n);
    }
  }
  return PairwiseSum(terms.col(0).data(), n);
}

FusionTraining TrainImpl(const std::vector<ScoreMatrix>& systems,
                         const TrialLabels& labels,
                         const OptimizerConfig& config) {
  CheckAligned(systems);
  const int num_systems = static_cast<int>(systems.size());
  const int k = systems[0].NumLanguages();

  // Reorder labels to match the score rows.
  std::vector<int> order = AlignByIds(systems[0].ids, labels);
  std::vector<int> label_ids(order.size());
  for (size_t t = 0; t < order.size(); ++t) {
    int c = labels.true_lang[order[t]];
    LID_REQUIRE(c >= 0 && c < k, "label index ", c, " for id '",
                systems[0].ids[t], "' is outside the ", k, "-language list");
    label_ids[t] = c;
  }

  Objective objective = [&](const Eigen::VectorXd& x,
                            Eigen::VectorXd* grad) -> double {
    return CllrObjective(x, systems, label_ids, grad);
  };

  Eigen::VectorXd x0(num_systems + k);
  x0.head(num_systems).setConstant(1.0 / num_systems);
  x0.tail(k).setZero();

  FusionTraining training;
  training.initial_cllr_bits = CllrObjective(x0, systems, label_ids, nullptr);
  OptResult opt = LbfgsMinimize(objective, x0, config);
  training.model.alphas = opt.x.head(num_systems);
  training.model.betas = opt.x.tail(k);
  training.model.languages = systems[0].languages;
  training.final_cllr_bits = opt.f;
  training.status = opt.status;
  training.iterations = opt.iterations;
  Validate(training.model);
  return training;
}

}  // namespace

ScoreMatrix FuseScores(const FusionModel& model,
                       const std::vector<ScoreMatrix>& systems) {
  Validate(model);
  CheckAligned(systems);
  LID_REQUIRE(static_cast<int>(systems.size()) == model.alphas.size(),
              "fusion model has ", model.alphas.size(), " system weights ",
              "but got ", systems.size(), " systems");
  LID_REQUIRE(model.languages.Names() == systems[0].languages.Names(),
              "fusion model language list does not match the systems");

  ScoreMatrix fused;
  fused.ids = systems[0].ids;
  fused.languages = systems[0].languages;
  fused.values = Eigen::MatrixXd::Zero(systems[0].values.rows(),
                                       systems[0].values.cols());
  for (size_t s = 0; s < systems.size(); ++s) {
    fused.values += model.alphas(s) * systems[s].values;
  }
  fused.values.rowwise() += model.betas.transpose();
  Validate(fused);
  return fused;
}

double CllrObjective(const Eigen::VectorXd& params,
                     const std::vector<ScoreMatrix>& systems,
                     const std::vector<int>& label_ids,
                     Eigen::VectorXd* grad) {
  return ObjectiveImpl(params, systems, label_ids, grad, /*parallel=*/true);
}

double CllrObjectiveSerial(const Eigen::VectorXd& params,
                           const std::vector<ScoreMatrix>& systems,
                           const std::vector<int>& label_ids,
                           Eigen::VectorXd* grad) {
  return ObjectiveImpl(params, systems, label_ids, grad, /*parallel=*/false);
}

FusionTraining TrainFusion(const std::vector<ScoreMatrix>& systems,
                           const TrialLabels& labels,
                           const OptimizerConfig& config) {
  return TrainImpl(systems, labels, config);
}

FusionTraining CalibrateSystem(const ScoreMatrix& system,
                               const TrialLabels& labels,
                               const OptimizerConfig& config) {
  return TrainImpl({system}, labels, config);
}

}  // namespace lid
