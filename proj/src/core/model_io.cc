// src/core/model_io.cc

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

#include "core/model_io.h"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "base/error.h"

namespace lid {

using nlohmann::json;

namespace {

constexpr int kModelVersion = 1;

json VectorToJson(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); i++) arr.push_back(v[i]);
  return arr;
}

json MatrixToJson(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); r++) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); c++) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

const json& Field(const json& j, const char* name, const std::string& path) {
  auto it = j.find(name);
  LID_REQUIRE(it != j.end(), "'", path, "': missing field '", name, "'");
  return *it;
}

Eigen::VectorXd VectorFromJson(const json& arr, const char* name,
                               const std::string& path) {
  LID_REQUIRE(arr.is_array(), "'", path, "': field '", name,
              "' must be an array");
  Eigen::VectorXd v(arr.size());
  for (size_t i = 0; i < arr.size(); i++) {
    LID_REQUIRE(arr[i].is_number(), "'", path, "': field '", name,
                "' has a non-numeric entry");
    v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  }
  return v;
}

Eigen::MatrixXd MatrixFromJson(const json& rows, const char* name,
                               const std::string& path) {
  LID_REQUIRE(rows.is_array() && !rows.empty(), "'", path, "': field '", name,
              "' must be a non-empty array of rows");
  size_t ncols = rows[0].size();
  Eigen::MatrixXd m(rows.size(), ncols);
  for (size_t r = 0; r < rows.size(); r++) {
    LID_REQUIRE(rows[r].is_array() && rows[r].size() == ncols, "'", path,
                "': field '", name, "' has ragged rows");
    for (size_t c = 0; c < ncols; c++)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rows[r][c].get<double>();
  }
  return m;
}

LanguageList LanguagesFromJson(const json& arr, const std::string& path) {
  LID_REQUIRE(arr.is_array(), "'", path, "': field 'languages' must be an "
              "array of strings");
  std::vector<std::string> names;
  for (const auto& e : arr) names.push_back(e.get<std::string>());
  return LanguageList(std::move(names));
}

void WriteJsonFile(const json& j, const std::string& path) {
  std::ofstream out(path);
  LID_REQUIRE(out.good(), "cannot open '", path, "' for writing");
  out << j.dump(2) << "\n";
  LID_REQUIRE(out.good(), "write failed for '", path, "'");
}

json ReadJsonFile(const std::string& path, const char* expect_format) {
  std::ifstream in(path);
  LID_REQUIRE(in.good(), "cannot open '", path, "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    Die("'", path, "': malformed JSON: ", e.what());
  }
  const json& format = Field(j, "format", path);
  LID_REQUIRE(format.is_string() && format.get<std::string>() == expect_format,
              "'", path, "': expected format '", expect_format, "'");
  const json& version = Field(j, "version", path);
  LID_REQUIRE(version.is_number_integer() &&
                  version.get<int>() == kModelVersion,
              "'", path, "': unsupported model version ", version.dump());
  return j;
}

}  // namespace

void Validate(const BackendModel& model) {
  int k = model.languages.Size();
  Eigen::Index d = model.mean.size();
  LID_REQUIRE(d >= 1, "backend model: empty mean vector");
  Eigen::Index feat = d;
  if (model.lda) {
    LID_REQUIRE(model.lda->rows() == d, "backend model: LDA rows ",
                model.lda->rows(), " != mean dim ", d);
    LID_REQUIRE(model.lda->cols() >= 1 &&
                    model.lda->cols() <= std::min<Eigen::Index>(k - 1, d),
                "backend model: LDA dim ", model.lda->cols(),
                " outside [1, min(K-1, D)]");
    feat = model.lda->cols();
  }
  LID_REQUIRE(model.weights.rows() == k && model.weights.cols() == feat,
              "backend model: weights ", model.weights.rows(), "x",
              model.weights.cols(), " inconsistent with K=", k,
              ", feature dim ", feat);
  LID_REQUIRE(model.bias.size() == k, "backend model: bias size ",
              model.bias.size(), " != K=", k);
  LID_REQUIRE(model.balance_weights.size() == k,
              "backend model: balance_weights size ",
              model.balance_weights.size(), " != K=", k);
  LID_REQUIRE((model.balance_weights.array() > 0).all(),
              "backend model: balance_weights must be strictly positive");
  LID_REQUIRE(std::abs(model.balance_weights.sum() - k) < 1e-6 * k,
              "backend model: balance_weights must sum to K=", k, ", got ",
              model.balance_weights.sum());
  LID_REQUIRE(model.mean.allFinite() && model.weights.allFinite() &&
                  model.bias.allFinite() &&
                  (!model.lda || model.lda->allFinite()),
              "backend model: non-finite entries");
}

void Validate(const FusionModel& model) {
  LID_REQUIRE(model.alphas.size() >= 1, "fusion model: need S >= 1 systems");
  LID_REQUIRE(model.betas.size() == model.languages.Size(),
              "fusion model: betas size ", model.betas.size(), " != K=",
              model.languages.Size());
  LID_REQUIRE(model.alphas.allFinite() && model.betas.allFinite(),
              "fusion model: non-finite entries");
}

void SaveModel(const BackendModel& model, const std::string& path) {
  Validate(model);
  json j;
  j["format"] = "lidkit-backend-model";
  j["version"] = kModelVersion;
  j["languages"] = model.languages.Names();
  j["mean"] = VectorToJson(model.mean);
  j["lda"] = model.lda ? MatrixToJson(*model.lda) : json(nullptr);
  j["weights"] = MatrixToJson(model.weights);
  j["bias"] = VectorToJson(model.bias);
  j["balance_weights"] = VectorToJson(model.balance_weights);
  j["center_before_normalize"] = model.center_before_normalize;
  WriteJsonFile(j, path);
}

BackendModel LoadBackendModel(const std::string& path) {
  json j = ReadJsonFile(path, "lidkit-backend-model");
  BackendModel model;
  model.languages = LanguagesFromJson(Field(j, "languages", path), path);
  model.mean = VectorFromJson(Field(j, "mean", path), "mean", path);
  const json& lda = Field(j, "lda", path);
  if (!lda.is_null()) model.lda = MatrixFromJson(lda, "lda", path);
  model.weights = MatrixFromJson(Field(j, "weights", path), "weights", path);
  model.bias = VectorFromJson(Field(j, "bias", path), "bias", path);
  model.balance_weights = VectorFromJson(Field(j, "balance_weights", path),
                                         "balance_weights", path);
  const json& cbn = Field(j, "center_before_normalize", path);
  LID_REQUIRE(cbn.is_boolean(), "'", path,
              "': field 'center_before_normalize' must be boolean");
  model.center_before_normalize = cbn.get<bool>();
  Validate(model);
  return model;
}

void SaveModel(const FusionModel& model, const std::string& path) {
  Validate(model);
  json j;
  j["format"] = "lidkit-fusion-model";
  j["version"] = kModelVersion;
  j["languages"] = model.languages.Names();
  j["alphas"] = VectorToJson(model.alphas);
  j["betas"] = VectorToJson(model.betas);
  WriteJsonFile(j, path);
}

FusionModel LoadFusionModel(const std::string& path) {
  json j = ReadJsonFile(path, "lidkit-fusion-model");
  FusionModel model;
  model.languages = LanguagesFromJson(Field(j, "languages", path), path);
  model.alphas = VectorFromJson(Field(j, "alphas", path), "alphas", path);
  model.betas = VectorFromJson(Field(j, "betas", path), "betas", path);
  Validate(model);
  return model;
}

void SaveScores(const ScoreMatrix& scores, const std::string& path) {
  Validate(scores);
  json j;
  j["format"] = "lidkit-scores";
  j["version"] = kModelVersion;
  j["languages"] = scores.languages.Names();
  j["ids"] = scores.ids;
  j["scores"] = MatrixToJson(scores.values);
  WriteJsonFile(j, path);
}

ScoreMatrix LoadScores(const std::string& path) {
  json j = ReadJsonFile(path, "lidkit-scores");
  ScoreMatrix scores;
  scores.languages = LanguagesFromJson(Field(j, "languages", path), path);
  const json& ids = Field(j, "ids", path);
  LID_REQUIRE(ids.is_array(), "'", path, "': field 'ids' must be an array");
  for (const auto& e : ids) scores.ids.push_back(e.get<std::string>());
  scores.values = MatrixFromJson(Field(j, "scores", path), "scores", path);
  Validate(scores);
  return scores;
}

}  // namespace lid
