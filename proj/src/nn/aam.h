// src/nn/aam.h

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

#ifndef LIDKIT_NN_AAM_H_
#define LIDKIT_NN_AAM_H_

#include <Eigen/Dense>

namespace lid {

struct AamParams {
  Eigen::MatrixXd class_weights;  // K x H
  double margin = 0.2;            // radians, in [0, pi/2)
  double scale = 30.0;
};

struct AamResult {
  double loss = 0.0;
  Eigen::VectorXd logits;              // K, margin-adjusted and scaled
  Eigen::VectorXd grad_embedding;      // H
  Eigen::MatrixXd grad_class_weights;  // K x H
};

// Additive angular margin softmax: cos_k = <w_k_hat, x_hat>; the target
// class logit is scale * cos(theta_y + margin) expanded as
// cos cos(m) - sin sin(m), with the linear fallback cos - m*sin(m) once
// cos(theta_y) <= cos(pi - margin) (the sum would leave [0, pi]); other
// logits are scale * cos_k. Loss is softmax cross-entropy over the logits.
// The loss value is invariant to positive rescaling of the embedding.
// Throws on a zero-norm embedding or class weight.
AamResult AamLoss(const Eigen::VectorXd& embedding, int label,
                  const AamParams& params);

}  // namespace lid

#endif  // LIDKIT_NN_AAM_H_
