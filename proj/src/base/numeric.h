// src/base/numeric.h

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

#ifndef LIDKIT_BASE_NUMERIC_H_
#define LIDKIT_BASE_NUMERIC_H_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace lid {

inline double LogSumExp(const Eigen::VectorXd& v) {
  double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); i++) s += std::exp(v[i] - m);
  return m + std::log(s);
}

inline Eigen::VectorXd Softmax(const Eigen::VectorXd& v) {
  Eigen::VectorXd p = (v.array() - v.maxCoeff()).exp();
  return p / p.sum();
}

// Argmax with ties broken toward the lowest index.
inline Eigen::Index ArgmaxLowest(const Eigen::VectorXd& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); i++)
    if (v[i] > v[best]) best = i;
  return best;
}

constexpr double kLn2 = 0.6931471805599453094172321214581766;

}  // namespace lid

#endif  // LIDKIT_BASE_NUMERIC_H_
