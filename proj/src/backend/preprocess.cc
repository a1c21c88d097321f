// src/backend/preprocess.cc

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

#include "backend/preprocess.h"

#include "base/error.h"

namespace lid {

Eigen::MatrixXd LengthNormalize(const Eigen::MatrixXd& vectors,
                                int* num_zero_rows) {
  Eigen::MatrixXd out = vectors;
  int zero_rows = 0;
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    double norm = out.row(r).norm();
    if (norm > 0.0) {
      out.row(r) /= norm;
    } else {
      ++zero_rows;
    }
  }
  if (num_zero_rows != nullptr) *num_zero_rows = zero_rows;
  return out;
}

Eigen::VectorXd FitCenter(const Eigen::MatrixXd& train) {
  LID_REQUIRE(train.rows() >= 1, "cannot fit a center on an empty matrix");
  return train.colwise().mean().transpose();
}

Eigen::MatrixXd ApplyCenter(const Eigen::MatrixXd& vectors,
                            const Eigen::VectorXd& mean) {
  LID_REQUIRE(vectors.cols() == mean.size(),
              "center dimension ", mean.size(), " does not match vectors of ",
              "dimension ", vectors.cols());
  return vectors.rowwise() - mean.transpose();
}

}  // namespace lid
