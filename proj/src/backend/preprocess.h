// src/backend/preprocess.h

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

#ifndef LIDKIT_BACKEND_PREPROCESS_H_
#define LIDKIT_BACKEND_PREPROCESS_H_

#include <Eigen/Dense>

namespace lid {

// Scales each row to unit Euclidean norm. Zero rows pass through unchanged;
// their count is reported through *num_zero_rows when non-null so callers
// can surface a warning. Idempotent.
Eigen::MatrixXd LengthNormalize(const Eigen::MatrixXd& vectors,
                                int* num_zero_rows = nullptr);

// Column mean of the training matrix. Requires at least one row.
Eigen::VectorXd FitCenter(const Eigen::MatrixXd& train);

// Subtracts the training mean from every row.
Eigen::MatrixXd ApplyCenter(const Eigen::MatrixXd& vectors,
                            const Eigen::VectorXd& mean);

}  // namespace lid

#endif  // LIDKIT_BACKEND_PREPROCESS_H_
