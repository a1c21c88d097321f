// src/backend/lda.h

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

#ifndef LIDKIT_BACKEND_LDA_H_
#define LIDKIT_BACKEND_LDA_H_

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "core/types.h"

namespace lid {

struct LdaResult {
  Eigen::MatrixXd projection;   // D x P, columns ordered by eigenvalue desc
  Eigen::VectorXd eigenvalues;  // P generalized eigenvalues, descending
  std::vector<std::string> warnings;
};

// Fisher LDA via the generalized symmetric eigenproblem Sb v = lambda Sw' v
// with Sw' = Sw + shrinkage * (tr Sw / D) * I. Columns are normalized to
// unit norm under the Sw' metric (v^T Sw' v = 1) and sign-fixed so the
// largest-magnitude component of each column is positive.
//
// labels are indices into languages; dim must satisfy dim <= min(K-1, D)
// where K = languages.Size() (Fisher rank bound). Classes with a
// single sample trigger a warning (shrinkage keeps Sw' invertible), as do
// near-zero eigenvalues among the selected columns.
LdaResult FitLda(const Eigen::MatrixXd& features,
                 const std::vector<int>& labels, const LanguageList& languages,
                 int dim, double shrinkage);

}  // namespace lid

#endif  // LIDKIT_BACKEND_LDA_H_
