// src/nn/gradcheck.h

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

#ifndef LIDKIT_NN_GRADCHECK_H_
#define LIDKIT_NN_GRADCHECK_H_

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace lid {

class Rng;

// Scalar function with analytic gradient, in optimizer form.
using ScalarFn =
    std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;

struct GradCheckReport {
  double max_rel_error = 0.0;
  int coords_checked = 0;
};

// Central-difference check of the analytic gradient of f at x0. Checks
// every coordinate, or a random subset of max_coords when the instance is
// larger; relative error is |a - n| / max(|a|, |n|, 1e-8).
GradCheckReport CheckGradient(const ScalarFn& f, const Eigen::VectorXd& x0,
                              double step, int max_coords, Rng* rng);

struct GradCheckCase {
  std::string name;
  double max_rel_error = 0.0;
  double threshold = 0.0;
  int coords_checked = 0;
  bool passed = false;
};

// Runs the full verification suite (pooling layers, AAM loss, classifier
// and calibration objectives, plus a linear sanity case) on seeded random
// instances. Every analytic gradient in the library is covered.
std::vector<GradCheckCase> RunGradCheckSuite(uint64_t seed);

}  // namespace lid

#endif  // LIDKIT_NN_GRADCHECK_H_
