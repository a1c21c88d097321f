// src/backend/multinomial.h

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

#ifndef LIDKIT_BACKEND_MULTINOMIAL_H_
#define LIDKIT_BACKEND_MULTINOMIAL_H_

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "core/types.h"

namespace lid {

// Inverse-frequency class weights: w_k proportional to 1/counts_k,
// normalized so the weights sum to K. A zero count is an error naming the
// language, since its weight would be undefined.
Eigen::VectorXd RebalanceWeights(const std::vector<int64_t>& counts,
                                 const LanguageList& languages);

struct MultinomialFit {
  Eigen::MatrixXd weights;  // K x P
  Eigen::VectorXd bias;     // K
  bool converged = false;   // gradient tolerance reached before max_iter
  int iterations = 0;
  double final_loss = 0.0;
  double grad_inf_norm = 0.0;
};

// Minimizes sum_t balance[y_t] * (-log softmax(W x_t + b)[y_t])
//           + l2_lambda * ||W||_F^2
// over (W, b) with the in-repo quasi-Newton optimizer. The L2 penalty
// covers W only. Throws if the loss goes non-finite, reporting the
// objective-evaluation count.
MultinomialFit FitMultinomial(const Eigen::MatrixXd& features,
                              const std::vector<int>& labels, int num_classes,
                              const Eigen::VectorXd& balance_weights,
                              double l2_lambda, int max_iter, double tol);

// Loss and gradient at explicit parameters, exposed for gradient tests.
// grad_weights / grad_bias may be null to request the value only.
double MultinomialLoss(const Eigen::MatrixXd& features,
                       const std::vector<int>& labels,
                       const Eigen::VectorXd& balance_weights,
                       double l2_lambda, const Eigen::MatrixXd& weights,
                       const Eigen::VectorXd& bias,
                       Eigen::MatrixXd* grad_weights,
                       Eigen::VectorXd* grad_bias);

}  // namespace lid

#endif  // LIDKIT_BACKEND_MULTINOMIAL_H_
