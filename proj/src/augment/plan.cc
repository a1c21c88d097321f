// src/augment/plan.cc

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

#include "augment/plan.h"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include <json.hpp>

#include "base/error.h"
#include "base/rng.h"

namespace lid {

namespace {

using nlohmann::json;

std::vector<std::string> ListWavFiles(const std::string& dir,
                                      TransformKind kind) {
  LID_REQUIRE(!dir.empty(), "no resource directory configured for enabled ",
              "transform '", TransformKindName(kind), "'");
  LID_REQUIRE(std::filesystem::is_directory(dir), "'", dir,
              "' is not a directory (transform '", TransformKindName(kind),
              "')");
  std::vector<std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav") {
      files.push_back(entry.path().string());
    }
  }
  LID_REQUIRE(!files.empty(), "no .wav files in '", dir,
              "' for enabled transform '", TransformKindName(kind), "'");
  std::sort(files.begin(), files.end());
  return files;
}

json StepToJson(const TransformStep& step) {
  json j;
  j["transform"] = TransformKindName(step.kind);
  switch (step.kind) {
    case TransformKind::kReverb:
      j["resource"] = step.resource;
      break;
    case TransformKind::kNoise:
      j["resource"] = step.resource;
      j["snr_db"] = step.snr_db;
      j["offset_fraction"] = step.offset_fraction;
      break;
    case TransformKind::kSpeed:
      j["factor"] = step.speed_factor;
      break;
  }
  return j;
}

TransformStep StepFromJson(const json& j) {
  LID_REQUIRE(j.is_object() && j.contains("transform"),
              "plan step is missing 'transform'");
  TransformStep step;
  step.kind = TransformKindFromName(j.at("transform").get<std::string>());
  switch (step.kind) {
    case TransformKind::kReverb:
      step.resource = j.at("resource").get<std::string>();
      break;
    case TransformKind::kNoise:
      step.resource = j.at("resource").get<std::string>();
      step.snr_db = j.at("snr_db").get<double>();
      step.offset_fraction = j.at("offset_fraction").get<double>();
      break;
    case TransformKind::kSpeed:
      step.speed_factor = j.at("factor").get<double>();
      break;
  }
  return step;
}

}  // namespace

const char* TransformKindName(TransformKind kind) {
  switch (kind) {
    case TransformKind::kReverb: return "reverb";
    case TransformKind::kNoise: return "noise";
    case TransformKind::kSpeed: return "speed";
  }
  return "unknown";
}

TransformKind TransformKindFromName(const std::string& name) {
  if (name == "reverb") return TransformKind::kReverb;
  if (name == "noise") return TransformKind::kNoise;
  if (name == "speed") return TransformKind::kSpeed;
  Die("unknown transform '", name, "'");
}

void Validate(const AugmentConfig& config) {
  LID_REQUIRE(config.n_paths >= 1, "n_paths must be at least 1, got ",
              config.n_paths);
  LID_REQUIRE(config.max_chain_len >= 1, "max_chain_len must be at least 1");
  LID_REQUIRE(!config.transforms.empty(), "no transforms enabled");
  LID_REQUIRE(config.snr_low_db <= config.snr_high_db,
              "snr range [", config.snr_low_db, ", ", config.snr_high_db,
              "] is inverted");
  LID_REQUIRE(!config.speed_factors.empty(), "speed factor set is empty");
  for (double f : config.speed_factors) {
    LID_REQUIRE(f > 0.0, "speed factor ", f, " is not positive");
  }
  LID_REQUIRE(config.dirichlet_alpha > 0.0, "dirichlet_alpha must be > 0");
  LID_REQUIRE(config.beta_alpha > 0.0, "beta_alpha must be > 0");
}

AugmentConfig AugmentConfigFromJson(const std::string& json_text) {
  json j = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  LID_REQUIRE(!j.is_discarded() && j.is_object(),
              "augment config is not a JSON object");
  AugmentConfig config;
  for (const auto& [key, value] : j.items()) {
    if (key == "n_paths") {
      config.n_paths = value.get<int>();
    } else if (key == "max_chain_len") {
      config.max_chain_len = value.get<int>();
    } else if (key == "transforms") {
      config.transforms.clear();
      for (const auto& name : value) {
        config.transforms.push_back(
            TransformKindFromName(name.get<std::string>()));
      }
    } else if (key == "snr_range_db") {
      LID_REQUIRE(value.is_array() && value.size() == 2,
                  "snr_range_db must be [low, high]");
      config.snr_low_db = value[0].get<double>();
      config.snr_high_db = value[1].get<double>();
    } else if (key == "speed_factors") {
      config.speed_factors = value.get<std::vector<double>>();
    } else if (key == "dirichlet_alpha") {
      config.dirichlet_alpha = value.get<double>();
    } else if (key == "beta_alpha") {
      config.beta_alpha = value.get<double>();
    } else if (key == "rir_dir") {
      config.rir_dir = value.get<std::string>();
    } else if (key == "noise_dir") {
      config.noise_dir = value.get<std::string>();
    } else if (key == "seed") {
      config.seed = value.get<std::uint64_t>();
    } else {
      Die("augment config: unknown field '", key, "'");
    }
  }
  Validate(config);
  return config;
}

std::string AugmentConfigToJson(const AugmentConfig& config) {
  json j;
  j["n_paths"] = config.n_paths;
  j["max_chain_len"] = config.max_chain_len;
  std::vector<std::string> names;
  for (TransformKind k : config.transforms) {
    names.push_back(TransformKindName(k));
  }
  j["transforms"] = names;
  j["snr_range_db"] = {config.snr_low_db, config.snr_high_db};
  j["speed_factors"] = config.speed_factors;
  j["dirichlet_alpha"] = config.dirichlet_alpha;
  j["beta_alpha"] = config.beta_alpha;
  j["rir_dir"] = config.rir_dir;
  j["noise_dir"] = config.noise_dir;
  j["seed"] = config.seed;
  return j.dump(2);
}

void Validate(const AugmentPlan& plan, int max_chain_len) {
  LID_REQUIRE(!plan.paths.empty(), "plan has no paths");
  LID_REQUIRE(plan.paths.size() == plan.path_weights.size(),
              "plan has ", plan.paths.size(), " paths but ",
              plan.path_weights.size(), " weights");
  double sum = 0.0;
  for (double w : plan.path_weights) {
    LID_REQUIRE(w >= 0.0, "negative path weight ", w);
    sum += w;
  }
  LID_REQUIRE(std::abs(sum - 1.0) < 1e-9, "path weights sum to ", sum,
              ", expected 1");
  for (size_t i = 0; i < plan.paths.size(); ++i) {
    LID_REQUIRE(!plan.paths[i].empty() &&
                    static_cast<int>(plan.paths[i].size()) <= max_chain_len,
                "path ", i, " has chain length ", plan.paths[i].size(),
                ", expected 1..", max_chain_len);
  }
  LID_REQUIRE(plan.interp_m >= 0.0 && plan.interp_m <= 1.0,
              "interpolation weight ", plan.interp_m, " outside [0, 1]");
}

std::string AugmentPlanToJson(const AugmentPlan& plan) {
  json j;
  j["seed"] = plan.seed;
  j["interp_m"] = plan.interp_m;
  j["path_weights"] = plan.path_weights;
  json paths = json::array();
  for (const auto& chain : plan.paths) {
    json steps = json::array();
    for (const TransformStep& step : chain) steps.push_back(StepToJson(step));
    paths.push_back(steps);
  }
  j["paths"] = paths;
  return j.dump();
}

AugmentPlan AugmentPlanFromJson(const std::string& json_text) {
  json j = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  LID_REQUIRE(!j.is_discarded() && j.is_object(),
              "augment plan is not a JSON object");
  AugmentPlan plan;
  plan.seed = j.at("seed").get<std::uint64_t>();
  plan.interp_m = j.at("interp_m").get<double>();
  plan.path_weights = j.at("path_weights").get<std::vector<double>>();
  for (const auto& chain : j.at("paths")) {
    std::vector<TransformStep> steps;
    for (const auto& step : chain) steps.push_back(StepFromJson(step));
    plan.paths.push_back(std::move(steps));
  }
  return plan;
}

AugmentPlan SamplePlan(const AugmentConfig& config, std::uint64_t seed) {
  Validate(config);
  bool uses_reverb = false, uses_noise = false;
  for (TransformKind k : config.transforms) {
    uses_reverb |= k == TransformKind::kReverb;
    uses_noise |= k == TransformKind::kNoise;
  }
  std::vector<std::string> rirs, noises;
  if (uses_reverb) rirs = ListWavFiles(config.rir_dir, TransformKind::kReverb);
  if (uses_noise) {
    noises = ListWavFiles(config.noise_dir, TransformKind::kNoise);
  }

  Rng rng(seed);
  AugmentPlan plan;
  plan.seed = seed;
  for (int p = 0; p < config.n_paths; ++p) {
    int chain_len = static_cast<int>(rng.UniformInt(1, config.max_chain_len));
    std::vector<TransformStep> chain;
    for (int s = 0; s < chain_len; ++s) {
      TransformStep step;
      step.kind = config.transforms[rng.UniformInt(
          0, static_cast<std::int64_t>(config.transforms.size()) - 1)];
      switch (step.kind) {
        case TransformKind::kReverb:
          step.resource = rirs[rng.UniformInt(
              0, static_cast<std::int64_t>(rirs.size()) - 1)];
          break;
        case TransformKind::kNoise:
          step.resource = noises[rng.UniformInt(
              0, static_cast<std::int64_t>(noises.size()) - 1)];
          step.snr_db = config.snr_low_db +
                        rng.Uniform() * (config.snr_high_db -
                                         config.snr_low_db);
          step.offset_fraction = rng.Uniform();
          break;
        case TransformKind::kSpeed:
          step.speed_factor = config.speed_factors[rng.UniformInt(
              0, static_cast<std::int64_t>(config.speed_factors.size()) - 1)];
          break;
      }
      chain.push_back(std::move(step));
    }
    plan.paths.push_back(std::move(chain));
  }
  plan.path_weights = rng.Dirichlet(config.dirichlet_alpha, config.n_paths);
  plan.interp_m = rng.Beta(config.beta_alpha, config.beta_alpha);
  Validate(plan, config.max_chain_len);
  return plan;
}

}  // namespace lid
