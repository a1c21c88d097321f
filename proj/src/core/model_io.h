// src/core/model_io.h

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

#ifndef LIDKIT_CORE_MODEL_IO_H_
#define LIDKIT_CORE_MODEL_IO_H_

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "core/types.h"

namespace lid {

// Trained classifier backend: scoring runs length-normalize -> center ->
// (LDA) -> W x + b, in that order (or center first when
// center_before_normalize is set).
struct BackendModel {
  Eigen::VectorXd mean;                    // D
  std::optional<Eigen::MatrixXd> lda;      // D x P, P <= min(K-1, D)
  Eigen::MatrixXd weights;                 // K x P' with P' = P or D
  Eigen::VectorXd bias;                    // K
  LanguageList languages;
  Eigen::VectorXd balance_weights;         // K, positive, sums to K
  bool center_before_normalize = false;
};

// Calibrated linear fusion: one scale per system, one offset per language.
struct FusionModel {
  Eigen::VectorXd alphas;  // S
  Eigen::VectorXd betas;   // K
  LanguageList languages;
};

void Validate(const BackendModel& model);
void Validate(const FusionModel& model);

// Versioned JSON, floats at full round-trip precision: load(save(m))
// reproduces every numeric field bit-identically.
void SaveModel(const BackendModel& model, const std::string& path);
void SaveModel(const FusionModel& model, const std::string& path);
BackendModel LoadBackendModel(const std::string& path);
FusionModel LoadFusionModel(const std::string& path);

// Score matrices share the same JSON conventions.
void SaveScores(const ScoreMatrix& scores, const std::string& path);
ScoreMatrix LoadScores(const std::string& path);

}  // namespace lid

#endif  // LIDKIT_CORE_MODEL_IO_H_
