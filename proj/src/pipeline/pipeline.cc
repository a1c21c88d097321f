// src/pipeline/pipeline.cc

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

#include "pipeline/pipeline.h"

#include <filesystem>
#include <fstream>
#include <functional>
#include <vector>

#include "base/error.h"
#include "core/embedding_io.h"
#include "core/manifest.h"
#include "core/model_io.h"
#include "fusion/fusion.h"
#include <json.hpp>

namespace lid {

namespace {

struct Split {
  EmbeddingSet embeddings;
  TrialLabels labels;
};

// Every stage body runs under this wrapper so errors always carry the
// failing stage's name.
template <typename Fn>
void Stage(const std::string& name, std::vector<std::string>* log, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    Die("pipeline stage '", name, "': ", e.what());
  }
  log->push_back(name);
}

Split LoadSplit(const std::string& manifest_path,
                const std::string& embeddings_path,
                const LanguageList& languages) {
  std::vector<Utterance> utterances = ReadManifest(manifest_path, languages);
  Split split;
  split.embeddings = ReadEmbeddings(embeddings_path);
  BindManifest(&split.embeddings, utterances);
  split.labels = LabelsFromManifest(utterances);
  LID_REQUIRE(split.labels.ids.size() == split.embeddings.ids.size(),
              "manifest ", manifest_path, " has unlabeled utterances; every ",
              "pipeline split must be fully labeled");
  return split;
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  LID_REQUIRE(out.good(), "cannot open '", path.string(), "' for writing");
  out << text;
  LID_REQUIRE(out.good(), "write to '", path.string(), "' failed");
}

}  // namespace

PipelineResult RunPipeline(const PipelineConfig& config,
                           const PipelineInputs& inputs,
                           const std::string& out_dir) {
  LID_REQUIRE(!config.languages.empty(),
              "pipeline config must list the languages");
  LanguageList languages(config.languages);
  PipelineResult result;

  Split train, dev, test;
  Stage("load", &result.stages, [&] {
    train = LoadSplit(inputs.train_manifest, inputs.train_embeddings,
                      languages);
    dev = LoadSplit(inputs.dev_manifest, inputs.dev_embeddings, languages);
    test = LoadSplit(inputs.test_manifest, inputs.test_embeddings, languages);
  });

  // The Fisher bound caps useful LDA dimensions at K-1; an over-wide request
  // (the 50-dim default targets larger language sets) is capped, not fatal.
  BackendConfig backend_config = config.backend;
  if (backend_config.use_lda &&
      backend_config.lda_dim > languages.Size() - 1) {
    result.warnings.push_back(
        StrCat("requested LDA dim ", backend_config.lda_dim,
               " exceeds the rank bound K-1 = ", languages.Size() - 1,
               "; capping"));
    backend_config.lda_dim = languages.Size() - 1;
  }

  BackendTraining trained;
  Stage("train-backend", &result.stages, [&] {
    trained = TrainBackend(train.embeddings, languages, backend_config);
  });
  // Splice the backend's own stage log (normalize, center, ...) into ours.
  result.stages.insert(result.stages.end(), trained.stages.begin(),
                       trained.stages.end());
  for (const std::string& w : trained.warnings) result.warnings.push_back(w);

  ScoreMatrix dev_scores, test_scores;
  Stage("score", &result.stages, [&] {
    dev_scores = Score(trained.model, dev.embeddings);
    test_scores = Score(trained.model, test.embeddings);
  });

  FusionTraining calibration;
  Stage("calibrate", &result.stages, [&] {
    calibration = CalibrateSystem(dev_scores, dev.labels, config.optimizer);
  });
  if (calibration.status == OptStatus::kLineSearchFailed) {
    result.warnings.push_back(
        "calibration line search stalled; using the best iterate found");
  }

  ScoreMatrix calibrated;
  Stage("evaluate", &result.stages, [&] {
    calibrated = FuseScores(calibration.model, {test_scores});
    result.report = Evaluate(calibrated, test.labels, config.p_target);
  });

  Stage("write", &result.stages, [&] {
    std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    SaveModel(trained.model, (dir / "backend_model.json").string());
    SaveModel(calibration.model, (dir / "calibration_model.json").string());
    SaveScores(dev_scores, (dir / "dev_scores.json").string());
    SaveScores(test_scores, (dir / "test_scores.json").string());
    SaveScores(calibrated, (dir / "test_scores_calibrated.json").string());
    WriteText(dir / "report.json", ReportToJson(result.report) + "\n");
    result.files = {"backend_model.json",   "calibration_model.json",
                    "dev_scores.json",      "test_scores.json",
                    "test_scores_calibrated.json", "report.json"};
    nlohmann::json manifest;
    manifest["files"] = result.files;
    WriteText(dir / "files.json", manifest.dump(2) + "\n");
    result.files.push_back("files.json");
  });
  return result;
}

}  // namespace lid
