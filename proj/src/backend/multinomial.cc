// src/backend/multinomial.cc

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

#include "backend/multinomial.h"

#include <cmath>

#include "base/error.h"
#include "base/numeric.h"
#include "fusion/lbfgs.h"

namespace lid {

Eigen::VectorXd RebalanceWeights(const std::vector<int64_t>& counts,
                                 const LanguageList& languages) {
  const int k = languages.Size();
  LID_REQUIRE(static_cast<int>(counts.size()) == k,
              "got ", counts.size(), " counts for ", k, " languages");
  Eigen::VectorXd inv(k);
  for (int c = 0; c < k; ++c) {
    LID_REQUIRE(counts[c] > 0, "language '", languages.Name(c),
                "' has no training samples; cannot rebalance");
    inv(c) = 1.0 / static_cast<double>(counts[c]);
  }
  return inv * (static_cast<double>(k) / inv.sum());
}

double MultinomialLoss(const Eigen::MatrixXd& features,
                       const std::vector<int>& labels,
                       const Eigen::VectorXd& balance_weights,
                       double l2_lambda, const Eigen::MatrixXd& weights,
                       const Eigen::VectorXd& bias,
                       Eigen::MatrixXd* grad_weights,
                       Eigen::VectorXd* grad_bias) {
  const Eigen::Index n = features.rows();
  const Eigen::Index k = weights.rows();
  LID_REQUIRE(features.cols() == weights.cols(),
              "feature dimension ", features.cols(),
              " does not match weight dimension ", weights.cols());
  LID_REQUIRE(bias.size() == k, "bias size ", bias.size(),
              " does not match ", k, " classes");

  double loss = l2_lambda * weights.squaredNorm();
  if (grad_weights != nullptr) {
    *grad_weights = 2.0 * l2_lambda * weights;
  }
  if (grad_bias != nullptr) {
    grad_bias->setZero(k);
  }
  for (Eigen::Index t = 0; t < n; ++t) {
    int y = labels[t];
    double bw = balance_weights(y);
    Eigen::VectorXd logits = weights * features.row(t).transpose() + bias;
    double lse = LogSumExp(logits);
    loss += bw * (lse - logits(y));
    if (grad_weights != nullptr || grad_bias != nullptr) {
      Eigen::VectorXd residual = (logits.array() - lse).exp();  // softmax
      residual(y) -= 1.0;
      residual *= bw;
      if (grad_weights != nullptr) {
        grad_weights->noalias() += residual * features.row(t);
      }
      if (grad_bias != nullptr) {
        *grad_bias += residual;
      }
    }
  }
  return loss;
}

MultinomialFit FitMultinomial(const Eigen::MatrixXd& features,
                              const std::vector<int>& labels, int num_classes,
                              const Eigen::VectorXd& balance_weights,
                              double l2_lambda, int max_iter, double tol) {
  const Eigen::Index n = features.rows();
  const Eigen::Index p = features.cols();
  const int k = num_classes;
  LID_REQUIRE(k >= 2, "multinomial regression needs at least 2 classes");
  LID_REQUIRE(static_cast<Eigen::Index>(labels.size()) == n,
              "got ", labels.size(), " labels for ", n, " feature rows");
  LID_REQUIRE(balance_weights.size() == k, "balance weight size ",
              balance_weights.size(), " does not match ", k, " classes");
  LID_REQUIRE(l2_lambda >= 0.0, "l2_lambda must be non-negative");
  LID_REQUIRE(tol > 0.0, "tol must be positive");
  for (Eigen::Index t = 0; t < n; ++t) {
    LID_REQUIRE(labels[t] >= 0 && labels[t] < k, "label index ", labels[t],
                " out of range for ", k, " classes");
  }

  // Parameters packed as [W row-major, b].
  const Eigen::Index dim = static_cast<Eigen::Index>(k) * p + k;
  int evaluations = 0;
  Objective objective = [&](const Eigen::VectorXd& x,
                            Eigen::VectorXd* grad) -> double {
    ++evaluations;
    Eigen::MatrixXd w =
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                       Eigen::RowMajor>>(x.data(), k, p);
    Eigen::VectorXd b = x.tail(k);
    Eigen::MatrixXd gw;
    Eigen::VectorXd gb;
    double loss = MultinomialLoss(features, labels, balance_weights, l2_lambda,
                                  w, b, &gw, &gb);
    if (!std::isfinite(loss)) {
      Die("non-finite multinomial loss at objective evaluation ", evaluations);
    }
    grad->resize(dim);
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                             Eigen::RowMajor>>(grad->data(), k, p) = gw;
    grad->tail(k) = gb;
    return loss;
  };

  OptimizerConfig opt;
  opt.max_iter = max_iter;
  opt.grad_tol = tol;
  OptResult opt_result =
      LbfgsMinimize(objective, Eigen::VectorXd::Zero(dim), opt);

  MultinomialFit fit;
  fit.weights =
      Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                     Eigen::RowMajor>>(opt_result.x.data(), k,
                                                       p);
  fit.bias = opt_result.x.tail(k);
  fit.converged = opt_result.status == OptStatus::kConverged;
  fit.iterations = opt_result.iterations;
  fit.final_loss = opt_result.f;
  fit.grad_inf_norm = opt_result.grad_inf_norm;
  return fit;
}

}  // namespace lid
