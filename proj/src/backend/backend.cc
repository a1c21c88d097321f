// src/backend/backend.cc

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

#include "backend/backend.h"

#include <cstdint>

#include "backend/lda.h"
#include "backend/multinomial.h"
#include "backend/preprocess.h"
#include "base/error.h"
#include "base/parallel.h"

namespace lid {

namespace {

// Mirrors the training-time preprocessing order exactly: normalize then
// center by default, the reverse when the model says so.
Eigen::RowVectorXd ScoreRow(const BackendModel& model,
                            const Eigen::RowVectorXd& row) {
  Eigen::RowVectorXd x = row;
  if (!model.center_before_normalize) {
    double norm = x.norm();
    if (norm > 0.0) x /= norm;
    x -= model.mean.transpose();
  } else {
    x -= model.mean.transpose();
    double norm = x.norm();
    if (norm > 0.0) x /= norm;
  }
  if (model.lda.has_value()) x = x * (*model.lda);
  return (model.weights * x.transpose() + model.bias).transpose();
}

ScoreMatrix ScoreImpl(const BackendModel& model,
                      const EmbeddingSet& embeddings, bool parallel) {
  Validate(model);
  Validate(embeddings);
  LID_REQUIRE(embeddings.Dim() == model.mean.size(),
              "embedding dimension ", embeddings.Dim(),
              " does not match model dimension ", model.mean.size());
  ScoreMatrix scores;
  scores.ids = embeddings.ids;
  scores.languages = model.languages;
  scores.values.resize(embeddings.NumRows(), model.languages.Size());
  auto body = [&](int64_t r) {
    scores.values.row(r) = ScoreRow(model, embeddings.vectors.row(r));
  };
  if (parallel) {
    ParallelFor(embeddings.NumRows(), body);
  } else {
    for (int64_t r = 0; r < embeddings.NumRows(); ++r) body(r);
  }
  Validate(scores);
  return scores;
}

}  // namespace

BackendTraining TrainBackend(const EmbeddingSet& train,
                             const LanguageList& languages,
                             const BackendConfig& config) {
  Validate(train);
  LID_REQUIRE(train.HasLabels(), "backend training needs labeled embeddings");
  LID_REQUIRE(languages.Size() >= 2,
              "backend training needs at least 2 languages");
  LID_REQUIRE(config.tol > 0.0, "backend tol must be positive");
  if (config.use_lda) {
    LID_REQUIRE(config.lda_dim >= 1, "lda_dim must be at least 1");
  }
  const int k = languages.Size();
  const Eigen::Index n = train.NumRows();

  std::vector<int> label_ids(n);
  std::vector<int64_t> counts(k, 0);
  for (Eigen::Index t = 0; t < n; ++t) {
    int c = train.labels[t];
    LID_REQUIRE(c >= 0 && c < k, "training label index ", c, " for '",
                train.ids[t], "' is outside the ", k, "-language list");
    label_ids[t] = c;
    ++counts[c];
  }

  BackendTraining training;
  BackendModel& model = training.model;
  model.languages = languages;
  model.center_before_normalize = config.center_before_normalize;

  int zero_rows = 0;
  Eigen::MatrixXd features;
  if (config.center_before_normalize) {
    model.mean = FitCenter(train.vectors);
    features =
        LengthNormalize(ApplyCenter(train.vectors, model.mean), &zero_rows);
    training.stages = {"center", "normalize"};
  } else {
    Eigen::MatrixXd normalized = LengthNormalize(train.vectors, &zero_rows);
    model.mean = FitCenter(normalized);
    features = ApplyCenter(normalized, model.mean);
    training.stages = {"normalize", "center"};
  }
  if (zero_rows > 0) {
    training.warnings.push_back(
        StrCat(zero_rows, " zero-norm embedding row(s) left unnormalized"));
  }

  if (config.use_lda) {
    LdaResult lda = FitLda(features, label_ids, languages, config.lda_dim,
                           config.lda_shrinkage);
    for (const std::string& w : lda.warnings) training.warnings.push_back(w);
    features = features * lda.projection;
    model.lda = std::move(lda.projection);
    training.stages.push_back("project");
  }

  if (config.rebalance) {
    model.balance_weights = RebalanceWeights(counts, languages);
  } else {
    model.balance_weights = Eigen::VectorXd::Ones(k);
  }

  training.stages.push_back("classify");
  MultinomialFit fit =
      FitMultinomial(features, label_ids, k, model.balance_weights,
                     config.l2_lambda, config.max_iter, config.tol);
  model.weights = std::move(fit.weights);
  model.bias = std::move(fit.bias);
  training.converged = fit.converged;
  training.iterations = fit.iterations;
  training.final_loss = fit.final_loss;
  Validate(model);
  return training;
}

ScoreMatrix Score(const BackendModel& model, const EmbeddingSet& embeddings) {
  return ScoreImpl(model, embeddings, /*parallel=*/true);
}

ScoreMatrix ScoreSerial(const BackendModel& model,
                        const EmbeddingSet& embeddings) {
  return ScoreImpl(model, embeddings, /*parallel=*/false);
}

}  // namespace lid
