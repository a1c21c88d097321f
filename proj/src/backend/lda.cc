// src/backend/lda.cc

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

#include "backend/lda.h"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "base/error.h"

namespace lid {

LdaResult FitLda(const Eigen::MatrixXd& features,
                 const std::vector<int>& labels, const LanguageList& languages,
                 int dim, double shrinkage) {
  const Eigen::Index n = features.rows();
  const Eigen::Index d = features.cols();
  const int k = languages.Size();
  LID_REQUIRE(static_cast<Eigen::Index>(labels.size()) == n,
              "got ", labels.size(), " labels for ", n, " feature rows");
  LID_REQUIRE(n >= 2, "LDA needs at least two samples");
  LID_REQUIRE(dim >= 1, "LDA dim must be at least 1");
  LID_REQUIRE(dim <= k - 1, "LDA dim ", dim, " exceeds the Fisher rank ",
              "bound K-1 = ", k - 1, " for ", k, " classes");
  LID_REQUIRE(dim <= d, "LDA dim ", dim, " exceeds the feature dimension ", d);
  LID_REQUIRE(shrinkage >= 0.0, "LDA shrinkage must be non-negative");

  LdaResult result;

  std::vector<Eigen::Index> counts(k, 0);
  Eigen::MatrixXd class_sums = Eigen::MatrixXd::Zero(k, d);
  for (Eigen::Index t = 0; t < n; ++t) {
    int c = labels[t];
    LID_REQUIRE(c >= 0 && c < k, "label index ", c, " out of range for ", k,
                " classes");
    ++counts[c];
    class_sums.row(c) += features.row(t);
  }
  int classes_present = 0;
  for (int c = 0; c < k; ++c) {
    if (counts[c] == 0) continue;
    ++classes_present;
    if (counts[c] == 1) {
      result.warnings.push_back(
          StrCat("class '", languages.Name(c),
                 "' has a single sample; within-class covariance relies on "
                 "shrinkage"));
    }
  }
  LID_REQUIRE(classes_present >= 2, "LDA needs samples from at least two ",
              "classes, got ", classes_present);

  // Scatter matrices normalized by N; the normalization cancels in the
  // generalized eigenvectors and the trace-scaled shrinkage term.
  Eigen::RowVectorXd global_mean = features.colwise().mean();
  Eigen::MatrixXd sb = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd sw = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd class_means = Eigen::MatrixXd::Zero(k, d);
  for (int c = 0; c < k; ++c) {
    if (counts[c] == 0) continue;
    class_means.row(c) = class_sums.row(c) / static_cast<double>(counts[c]);
    Eigen::RowVectorXd diff = class_means.row(c) - global_mean;
    sb += (static_cast<double>(counts[c]) / n) * diff.transpose() * diff;
  }
  for (Eigen::Index t = 0; t < n; ++t) {
    Eigen::RowVectorXd diff = features.row(t) - class_means.row(labels[t]);
    sw += diff.transpose() * diff;
  }
  sw /= static_cast<double>(n);

  double trace_scale = sw.trace() / static_cast<double>(d);
  Eigen::MatrixXd sw_reg =
      sw + shrinkage * trace_scale * Eigen::MatrixXd::Identity(d, d);

  // Solves Sb v = lambda Sw' v; eigenvectors come back normalized so that
  // V^T Sw' V = I, which is exactly the metric normalization we publish.
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(sb, sw_reg);
  LID_REQUIRE(solver.info() == Eigen::Success,
              "generalized eigendecomposition failed; the within-class "
              "scatter may be singular even after shrinkage");

  // Eigen orders eigenvalues ascending; take the top `dim` in reverse.
  result.projection.resize(d, dim);
  result.eigenvalues.resize(dim);
  double top_eigenvalue = std::abs(solver.eigenvalues()(d - 1));
  for (int j = 0; j < dim; ++j) {
    Eigen::Index src = d - 1 - j;
    result.eigenvalues(j) = solver.eigenvalues()(src);
    Eigen::VectorXd col = solver.eigenvectors().col(src);
    Eigen::Index imax;
    col.cwiseAbs().maxCoeff(&imax);
    if (col(imax) < 0.0) col = -col;
    result.projection.col(j) = col;
    if (std::abs(result.eigenvalues(j)) <=
        1e-10 * std::max(1.0, top_eigenvalue)) {
      result.warnings.push_back(
          StrCat("LDA eigenvalue ", j, " is approximately zero; classes are "
                 "not separable along this direction"));
    }
  }
  LID_REQUIRE(result.projection.allFinite(),
              "LDA projection contains non-finite values");
  return result;
}

}  // namespace lid
