// src/fusion/lbfgs.h

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

#ifndef LIDKIT_FUSION_LBFGS_H_
#define LIDKIT_FUSION_LBFGS_H_

#include <Eigen/Dense>
#include <functional>

namespace lid {

struct OptimizerConfig {
  int history = 10;
  int max_iter = 200;
  double grad_tol = 1e-7;   // infinity norm of the gradient
  double wolfe_c1 = 1e-4;   // sufficient-decrease constant
  double wolfe_c2 = 0.9;    // curvature constant, c1 < c2 < 1
};

enum class OptStatus {
  kConverged,         // gradient infinity norm below grad_tol
  kMaxIterations,
  kLineSearchFailed,  // no acceptable step; x holds the last good iterate
};

struct OptResult {
  Eigen::VectorXd x;
  double f = 0.0;
  double grad_inf_norm = 0.0;
  int iterations = 0;
  OptStatus status = OptStatus::kConverged;
};

const char* OptStatusName(OptStatus status);

// Returns f(x) and writes the gradient into *grad (always non-null).
using Objective =
    std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;

// Limited-memory BFGS with two-loop recursion and a strong-Wolfe line
// search. Monotone: the returned f never exceeds f(x0). Throws on a
// non-finite objective or gradient at any trial point.
OptResult LbfgsMinimize(const Objective& objective, const Eigen::VectorXd& x0,
                        const OptimizerConfig& config = {});

}  // namespace lid

#endif  // LIDKIT_FUSION_LBFGS_H_
