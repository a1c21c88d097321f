// src/nn/aam.cc

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

#include "nn/aam.h"

#include <cmath>

#include "base/error.h"
#include "base/numeric.h"

namespace lid {

AamResult AamLoss(const Eigen::VectorXd& embedding, int label,
                  const AamParams& params) {
  const Eigen::Index k = params.class_weights.rows();
  const Eigen::Index h = params.class_weights.cols();
  LID_REQUIRE(k >= 2, "AAM loss needs at least 2 classes");
  LID_REQUIRE(embedding.size() == h, "embedding dimension ", embedding.size(),
              " does not match class weight dimension ", h);
  LID_REQUIRE(label >= 0 && label < k, "label ", label,
              " out of range for ", k, " classes");
  LID_REQUIRE(params.margin >= 0.0 && params.margin < M_PI / 2.0,
              "margin must lie in [0, pi/2)");
  LID_REQUIRE(params.scale > 0.0, "scale must be positive");
  LID_REQUIRE(embedding.allFinite() && params.class_weights.allFinite(),
              "AAM inputs must be finite");

  const double x_norm = embedding.norm();
  LID_REQUIRE(x_norm > 0.0, "zero-norm embedding has no direction");
  Eigen::VectorXd x_hat = embedding / x_norm;

  Eigen::VectorXd w_norms(k);
  Eigen::MatrixXd w_hat(k, h);
  for (Eigen::Index c = 0; c < k; ++c) {
    w_norms(c) = params.class_weights.row(c).norm();
    LID_REQUIRE(w_norms(c) > 0.0, "class weight ", c, " has zero norm");
    w_hat.row(c) = params.class_weights.row(c) / w_norms(c);
  }

  // Rounding can push the dot product marginally outside [-1, 1].
  Eigen::VectorXd cosines =
      (w_hat * x_hat).cwiseMax(-1.0).cwiseMin(1.0);

  const double cos_m = std::cos(params.margin);
  const double sin_m = std::sin(params.margin);
  const double cos_y = cosines(label);
  // sin(theta) with a guard against the derivative pole at |cos| = 1.
  const double sin_y = std::sqrt(std::max(1.0 - cos_y * cos_y, 0.0));
  const double sin_y_safe = std::max(sin_y, 1e-8);

  AamResult result;
  result.logits = params.scale * cosines;
  double dtarget_dcos;  // d(adjusted target logit)/d(cos_y), before scale
  if (cos_y > std::cos(M_PI - params.margin)) {
    result.logits(label) = params.scale * (cos_y * cos_m - sin_y * sin_m);
    dtarget_dcos = cos_m + cos_y * sin_m / sin_y_safe;
  } else {
    // theta + margin would exceed pi; fall back to a monotone linear
    // penalty with unit slope.
    result.logits(label) = params.scale * (cos_y - params.margin * sin_m);
    dtarget_dcos = 1.0;
  }

  const double lse = LogSumExp(result.logits);
  result.loss = lse - result.logits(label);

  // dL/dlogit = softmax - onehot; chain through the margin and the
  // normalized dot products.
  Eigen::VectorXd residual = (result.logits.array() - lse).exp();
  residual(label) -= 1.0;
  Eigen::VectorXd dcos = params.scale * residual;
  dcos(label) *= dtarget_dcos;

  // dcos_k/dx = (w_k_hat - cos_k * x_hat) / |x|.
  result.grad_embedding =
      (w_hat.transpose() * dcos - (dcos.dot(cosines)) * x_hat) / x_norm;
  // dcos_k/dw_k = (x_hat - cos_k * w_k_hat) / |w_k|.
  result.grad_class_weights.resize(k, h);
  for (Eigen::Index c = 0; c < k; ++c) {
    result.grad_class_weights.row(c) =
        dcos(c) * (x_hat.transpose() - cosines(c) * w_hat.row(c)) / w_norms(c);
  }
  return result;
}

}  // namespace lid
