// tools/lidkit.cc

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

// Command-line surface: augment, train-backend, score, calibrate, fuse,
// evaluate, gradcheck, fewshot, pipeline. Every error exits nonzero with a
// stage-prefixed message; exit code 0 means the command fully succeeded.

#include <CLI11.hpp>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "augment/augmix.h"
#include "base/error.h"
#include "core/embedding_io.h"
#include "core/manifest.h"
#include "core/model_io.h"
#include "fusion/fusion.h"
#include "metrics/report.h"
#include "nn/gradcheck.h"
#include "pipeline/fewshot.h"
#include "pipeline/pipeline.h"

namespace lid {
namespace {

// Shared state for the global flags; each subcommand callback reads it
// after parsing.
struct GlobalArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool json = false;
};

PipelineConfig LoadConfig(const GlobalArgs& args) {
  PipelineConfig config;
  if (!args.config_path.empty()) config = LoadPipelineConfig(args.config_path);
  if (args.seed_given) config.seed = args.seed;
  return config;
}

// Rethrows any failure with the subcommand name so every error carries a
// stage prefix; pipeline errors already name their inner stage.
void RunStage(const std::string& name, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    std::string msg = e.what();
    if (msg.rfind("pipeline stage", 0) == 0) throw;
    Die(name, ": ", msg);
  }
}

EmbeddingSet LoadBoundEmbeddings(const std::string& manifest_path,
                                 const std::string& embeddings_path,
                                 const LanguageList& languages) {
  std::vector<Utterance> utterances = ReadManifest(manifest_path, languages);
  EmbeddingSet set = ReadEmbeddings(embeddings_path);
  BindManifest(&set, utterances);
  return set;
}

TrialLabels LoadLabels(const std::string& manifest_path,
                       const LanguageList& languages) {
  TrialLabels labels =
      LabelsFromManifest(ReadManifest(manifest_path, languages));
  LID_REQUIRE(!labels.ids.empty(), "manifest '", manifest_path,
              "' has no labeled utterances");
  return labels;
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  LID_REQUIRE(out.good(), "cannot open '", path, "' for writing");
  out << text;
  LID_REQUIRE(out.good(), "write to '", path, "' failed");
}

std::string JoinPath(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void EnsureOutDir(const std::string& dir) {
  std::filesystem::create_directories(dir);
}

int RunMain(int argc, char** argv) {
  CLI::App app{"Spoken language identification backend and evaluation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalArgs global;
  app.add_option("--config", global.config_path, "Pipeline config JSON file");
  auto* seed_opt =
      app.add_option("--seed", global.seed, "RNG seed (overrides config)");
  app.add_option("--out-dir", global.out_dir,
                 "Directory for produced artifacts");
  app.add_flag("--json", global.json, "Machine-readable JSON on stdout");

  // ---- augment ----
  auto* aug = app.add_subcommand(
      "augment", "Augment every manifest utterance into out-dir");
  std::string aug_manifest;
  aug->add_option("--manifest", aug_manifest, "Input JSONL manifest")
      ->required();
  aug->callback([&] {
    RunStage("augment", [&] {
      PipelineConfig config = LoadConfig(global);
      if (global.seed_given) config.augment.seed = global.seed;
      LanguageList languages(config.languages);
      std::vector<Utterance> utterances =
          ReadManifest(aug_manifest, languages);
      std::vector<AugmentedFile> outputs =
          RunAugmentBatch(utterances, config.augment, global.out_dir);
      if (global.json) {
        nlohmann::json j;
        j["count"] = outputs.size();
        j["out_dir"] = global.out_dir;
        std::cout << j.dump() << "\n";
      } else {
        std::cout << "augmented " << outputs.size() << " utterance(s) into "
                  << global.out_dir << "\n";
      }
    });
  });

  // ---- train-backend ----
  auto* train = app.add_subcommand(
      "train-backend", "Fit the classifier backend on labeled embeddings");
  std::string train_manifest, train_embeddings, train_model_out;
  train->add_option("--manifest", train_manifest, "Labeled JSONL manifest")
      ->required();
  train->add_option("--embeddings", train_embeddings, "Embedding file")
      ->required();
  train->add_option("--model-out", train_model_out,
                    "Output path (default <out-dir>/backend_model.json)");
  train->callback([&] {
    RunStage("train-backend", [&] {
      PipelineConfig config = LoadConfig(global);
      LID_REQUIRE(!config.languages.empty(),
                  "config must list the languages");
      LanguageList languages(config.languages);
      EmbeddingSet set =
          LoadBoundEmbeddings(train_manifest, train_embeddings, languages);
      BackendTraining trained =
          TrainBackend(set, languages, config.backend);
      for (const std::string& w : trained.warnings)
        std::cerr << "warning: " << w << "\n";
      std::string out = train_model_out;
      if (out.empty()) {
        EnsureOutDir(global.out_dir);
        out = JoinPath(global.out_dir, "backend_model.json");
      }
      SaveModel(trained.model, out);
      if (global.json) {
        nlohmann::json j;
        j["model"] = out;
        j["converged"] = trained.converged;
        j["iterations"] = trained.iterations;
        j["final_loss"] = trained.final_loss;
        std::cout << j.dump() << "\n";
      } else {
        std::printf("wrote %s (%s, %d iterations, loss %.6f)\n", out.c_str(),
                    trained.converged ? "converged" : "iteration limit",
                    trained.iterations, trained.final_loss);
      }
    });
  });

  // ---- score ----
  auto* score = app.add_subcommand(
      "score", "Score embeddings with a trained backend model");
  std::string score_model, score_manifest, score_embeddings, score_out;
  score->add_option("--model", score_model, "Backend model JSON")->required();
  score->add_option("--manifest", score_manifest, "JSONL manifest")
      ->required();
  score->add_option("--embeddings", score_embeddings, "Embedding file")
      ->required();
  score->add_option("--scores-out", score_out,
                    "Output path (default <out-dir>/scores.json)");
  score->callback([&] {
    RunStage("score", [&] {
      BackendModel model = LoadBackendModel(score_model);
      EmbeddingSet set = LoadBoundEmbeddings(score_manifest, score_embeddings,
                                             model.languages);
      ScoreMatrix scores = Score(model, set);
      std::string out = score_out;
      if (out.empty()) {
        EnsureOutDir(global.out_dir);
        out = JoinPath(global.out_dir, "scores.json");
      }
      SaveScores(scores, out);
      if (global.json) {
        nlohmann::json j;
        j["scores"] = out;
        j["rows"] = scores.NumRows();
        std::cout << j.dump() << "\n";
      } else {
        std::printf("wrote %s (%d rows x %d languages)\n", out.c_str(),
                    scores.NumRows(), scores.NumLanguages());
      }
    });
  });

  // ---- calibrate ----
  auto* cal = app.add_subcommand(
      "calibrate", "Train an affine score calibration on labeled scores");
  std::string cal_scores, cal_labels, cal_model_out;
  cal->add_option("--scores", cal_scores, "Score matrix JSON")->required();
  cal->add_option("--labels", cal_labels, "Labeled JSONL manifest")
      ->required();
  cal->add_option("--model-out", cal_model_out,
                  "Output path (default <out-dir>/calibration_model.json)");
  cal->callback([&] {
    RunStage("calibrate", [&] {
      PipelineConfig config = LoadConfig(global);
      ScoreMatrix scores = LoadScores(cal_scores);
      TrialLabels labels = LoadLabels(cal_labels, scores.languages);
      FusionTraining result =
          CalibrateSystem(scores, labels, config.optimizer);
      std::string out = cal_model_out;
      if (out.empty()) {
        EnsureOutDir(global.out_dir);
        out = JoinPath(global.out_dir, "calibration_model.json");
      }
      SaveModel(result.model, out);
      if (global.json) {
        nlohmann::json j;
        j["model"] = out;
        j["initial_cllr_bits"] = result.initial_cllr_bits;
        j["final_cllr_bits"] = result.final_cllr_bits;
        j["status"] = OptStatusName(result.status);
        std::cout << j.dump() << "\n";
      } else {
        std::printf("wrote %s (Cllr %.4f -> %.4f bits, %s)\n", out.c_str(),
                    result.initial_cllr_bits, result.final_cllr_bits,
                    OptStatusName(result.status));
      }
    });
  });

  // ---- fuse ----
  auto* fuse = app.add_subcommand(
      "fuse", "Train a score fusion (--labels) or apply one (--model)");
  std::vector<std::string> fuse_scores;
  std::string fuse_labels, fuse_model, fuse_model_out, fuse_out;
  fuse->add_option("--scores", fuse_scores,
                   "Score matrix JSON, once per system")
      ->required();
  fuse->add_option("--labels", fuse_labels,
                   "Labeled JSONL manifest (training mode)");
  fuse->add_option("--model", fuse_model, "Fusion model JSON (apply mode)");
  fuse->add_option("--model-out", fuse_model_out,
                   "Output path (default <out-dir>/fusion_model.json)");
  fuse->add_option("--fused-out", fuse_out,
                   "Fused scores path (default <out-dir>/fused_scores.json)");
  fuse->callback([&] {
    RunStage("fuse", [&] {
      LID_REQUIRE(fuse_labels.empty() != fuse_model.empty(),
                  "pass exactly one of --labels (train) or --model (apply)");
      std::vector<ScoreMatrix> systems;
      for (const std::string& path : fuse_scores)
        systems.push_back(LoadScores(path));
      LID_REQUIRE(!systems.empty(), "no systems given");
      if (!fuse_labels.empty()) {
        PipelineConfig config = LoadConfig(global);
        TrialLabels labels =
            LoadLabels(fuse_labels, systems[0].languages);
        FusionTraining result =
            TrainFusion(systems, labels, config.optimizer);
        std::string out = fuse_model_out;
        if (out.empty()) {
          EnsureOutDir(global.out_dir);
          out = JoinPath(global.out_dir, "fusion_model.json");
        }
        SaveModel(result.model, out);
        if (global.json) {
          nlohmann::json j;
          j["model"] = out;
          j["initial_cllr_bits"] = result.initial_cllr_bits;
          j["final_cllr_bits"] = result.final_cllr_bits;
          j["status"] = OptStatusName(result.status);
          std::cout << j.dump() << "\n";
        } else {
          std::printf("wrote %s (Cllr %.4f -> %.4f bits, %s)\n", out.c_str(),
                      result.initial_cllr_bits, result.final_cllr_bits,
                      OptStatusName(result.status));
        }
      } else {
        FusionModel model = LoadFusionModel(fuse_model);
        ScoreMatrix fused = FuseScores(model, systems);
        std::string out = fuse_out;
        if (out.empty()) {
          EnsureOutDir(global.out_dir);
          out = JoinPath(global.out_dir, "fused_scores.json");
        }
        SaveScores(fused, out);
        if (global.json) {
          nlohmann::json j;
          j["scores"] = out;
          j["rows"] = fused.NumRows();
          std::cout << j.dump() << "\n";
        } else {
          std::printf("wrote %s (%d rows)\n", out.c_str(), fused.NumRows());
        }
      }
    });
  });

  // ---- evaluate ----
  auto* eval = app.add_subcommand(
      "evaluate", "Report Cavg, minCavg, EER, Cllr, and accuracy");
  std::string eval_scores, eval_labels;
  double eval_p_target = -1.0;
  eval->add_option("--scores", eval_scores, "Score matrix JSON")->required();
  eval->add_option("--labels", eval_labels, "Labeled JSONL manifest")
      ->required();
  eval->add_option("--p-target", eval_p_target,
                   "Target prior (default from config, else 0.5)");
  eval->callback([&] {
    RunStage("evaluate", [&] {
      PipelineConfig config = LoadConfig(global);
      double p_target =
          eval_p_target >= 0.0 ? eval_p_target : config.p_target;
      ScoreMatrix scores = LoadScores(eval_scores);
      TrialLabels labels = LoadLabels(eval_labels, scores.languages);
      MetricReport report = Evaluate(scores, labels, p_target);
      if (global.json) {
        std::cout << ReportToJson(report) << "\n";
      } else {
        std::cout << RenderTable(report);
      }
    });
  });

  // ---- gradcheck ----
  auto* grad = app.add_subcommand(
      "gradcheck", "Central-difference checks of every analytic gradient");
  grad->callback([&] {
    RunStage("gradcheck", [&] {
      PipelineConfig config = LoadConfig(global);
      std::vector<GradCheckCase> cases = RunGradCheckSuite(config.seed);
      int failures = 0;
      if (global.json) {
        nlohmann::json j = nlohmann::json::array();
        for (const GradCheckCase& c : cases) {
          j.push_back({{"name", c.name},
                       {"max_rel_error", c.max_rel_error},
                       {"threshold", c.threshold},
                       {"coords_checked", c.coords_checked},
                       {"passed", c.passed}});
          if (!c.passed) ++failures;
        }
        std::cout << j.dump() << "\n";
      } else {
        std::printf("%-20s %12s %10s  %s\n", "case", "max_rel_err",
                    "threshold", "status");
        for (const GradCheckCase& c : cases) {
          std::printf("%-20s %12.3e %10.0e  %s\n", c.name.c_str(),
                      c.max_rel_error, c.threshold,
                      c.passed ? "pass" : "FAIL");
          if (!c.passed) ++failures;
        }
      }
      LID_REQUIRE(failures == 0, failures, " gradient check(s) failed");
    });
  });

  // ---- fewshot ----
  auto* few = app.add_subcommand(
      "fewshot",
      "Synthetic few-shot enrollment experiment (EER/Cavg vs size)");
  std::vector<int> few_sizes;
  int few_seeds = 5;
  SyntheticSpec few_spec;
  few_spec.n_languages = 13;
  few_spec.dim = 16;
  few_spec.per_class_count = 50;
  // Angular SNR 1.5 leaves visible headroom, so the curve actually falls.
  few_spec.class_separation = 1.5;
  few_spec.noise_scale = 1.0;
  few->add_option("--sizes", few_sizes, "Enrollment sizes per language")
      ->required()
      ->delimiter(',');
  few->add_option("--num-seeds", few_seeds, "Averaging repetitions");
  few->add_option("--n-languages", few_spec.n_languages, "Languages");
  few->add_option("--dim", few_spec.dim, "Embedding dimension");
  few->add_option("--pool", few_spec.per_class_count,
                  "Generated pool size per language");
  few->add_option("--separation", few_spec.class_separation,
                  "Class mean separation");
  few->add_option("--noise", few_spec.noise_scale, "Sample noise scale");
  few->callback([&] {
    RunStage("fewshot", [&] {
      PipelineConfig config = LoadConfig(global);
      few_spec.seed = config.seed;
      FewshotResult result = RunFewshot(few_spec, few_sizes, few_seeds,
                                        config.p_target, config.backend);
      EnsureOutDir(global.out_dir);
      std::string data_path = JoinPath(global.out_dir, "fewshot.dat");
      WriteText(data_path, result.data);
      if (global.json) {
        nlohmann::json j = nlohmann::json::array();
        for (const FewshotRow& row : result.rows)
          j.push_back({{"size", row.size},
                       {"eer_percent", row.eer_percent},
                       {"c_avg", row.c_avg}});
        std::cout << j.dump() << "\n";
      } else {
        std::cout << result.table << "data written to " << data_path << "\n";
      }
    });
  });

  // ---- pipeline ----
  auto* pipe = app.add_subcommand(
      "pipeline", "Train on train, calibrate on dev, evaluate on test");
  PipelineInputs inputs;
  pipe->add_option("--train-manifest", inputs.train_manifest)->required();
  pipe->add_option("--train-embeddings", inputs.train_embeddings)->required();
  pipe->add_option("--dev-manifest", inputs.dev_manifest)->required();
  pipe->add_option("--dev-embeddings", inputs.dev_embeddings)->required();
  pipe->add_option("--test-manifest", inputs.test_manifest)->required();
  pipe->add_option("--test-embeddings", inputs.test_embeddings)->required();
  pipe->callback([&] {
    PipelineConfig config = LoadConfig(global);
    PipelineResult result = RunPipeline(config, inputs, global.out_dir);
    for (const std::string& w : result.warnings)
      std::cerr << "warning: " << w << "\n";
    if (global.json) {
      nlohmann::json j;
      j["stages"] = result.stages;
      j["files"] = result.files;
      j["report"] = nlohmann::json::parse(ReportToJson(result.report));
      std::cout << j.dump() << "\n";
    } else {
      std::string stages;
      for (const std::string& s : result.stages) {
        if (!stages.empty()) stages += " -> ";
        stages += s;
      }
      std::cout << "stages: " << stages << "\n" << RenderTable(result.report)
                << "artifacts in " << global.out_dir << "\n";
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  return 0;
}

}  // namespace
}  // namespace lid

int main(int argc, char** argv) {
  try {
    return lid::RunMain(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
