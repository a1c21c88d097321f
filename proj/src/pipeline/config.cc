// src/pipeline/config.cc

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

#include "pipeline/config.h"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "base/error.h"

namespace lid {

namespace {

using nlohmann::json;

BackendConfig BackendFromJson(const json& j) {
  BackendConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "use_lda") {
      c.use_lda = value.get<bool>();
    } else if (key == "lda_dim") {
      c.lda_dim = value.get<int>();
    } else if (key == "lda_shrinkage") {
      c.lda_shrinkage = value.get<double>();
    } else if (key == "rebalance") {
      c.rebalance = value.get<bool>();
    } else if (key == "l2_lambda") {
      c.l2_lambda = value.get<double>();
    } else if (key == "max_iter") {
      c.max_iter = value.get<int>();
    } else if (key == "tol") {
      c.tol = value.get<double>();
    } else if (key == "center_before_normalize") {
      c.center_before_normalize = value.get<bool>();
    } else {
      Die("backend config: unknown field '", key, "'");
    }
  }
  return c;
}

json BackendToJson(const BackendConfig& c) {
  json j;
  j["use_lda"] = c.use_lda;
  j["lda_dim"] = c.lda_dim;
  j["lda_shrinkage"] = c.lda_shrinkage;
  j["rebalance"] = c.rebalance;
  j["l2_lambda"] = c.l2_lambda;
  j["max_iter"] = c.max_iter;
  j["tol"] = c.tol;
  j["center_before_normalize"] = c.center_before_normalize;
  return j;
}

OptimizerConfig OptimizerFromJson(const json& j) {
  OptimizerConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "history") {
      c.history = value.get<int>();
    } else if (key == "max_iter") {
      c.max_iter = value.get<int>();
    } else if (key == "grad_tol") {
      c.grad_tol = value.get<double>();
    } else if (key == "wolfe_c1") {
      c.wolfe_c1 = value.get<double>();
    } else if (key == "wolfe_c2") {
      c.wolfe_c2 = value.get<double>();
    } else {
      Die("optimizer config: unknown field '", key, "'");
    }
  }
  return c;
}

json OptimizerToJson(const OptimizerConfig& c) {
  json j;
  j["history"] = c.history;
  j["max_iter"] = c.max_iter;
  j["grad_tol"] = c.grad_tol;
  j["wolfe_c1"] = c.wolfe_c1;
  j["wolfe_c2"] = c.wolfe_c2;
  return j;
}

}  // namespace

PipelineConfig PipelineConfigFromJson(const std::string& json_text) {
  json j = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  LID_REQUIRE(!j.is_discarded() && j.is_object(),
              "pipeline config is not a JSON object");
  PipelineConfig config;
  for (const auto& [key, value] : j.items()) {
    if (key == "languages") {
      config.languages = value.get<std::vector<std::string>>();
    } else if (key == "backend") {
      config.backend = BackendFromJson(value);
    } else if (key == "optimizer") {
      config.optimizer = OptimizerFromJson(value);
    } else if (key == "augment") {
      config.augment = AugmentConfigFromJson(value.dump());
    } else if (key == "metrics") {
      for (const auto& [mkey, mvalue] : value.items()) {
        if (mkey == "p_target") {
          config.p_target = mvalue.get<double>();
        } else {
          Die("metrics config: unknown field '", mkey, "'");
        }
      }
    } else if (key == "seed") {
      config.seed = value.get<std::uint64_t>();
    } else {
      Die("pipeline config: unknown field '", key, "'");
    }
  }
  LID_REQUIRE(config.p_target > 0.0 && config.p_target < 1.0,
              "p_target must lie in (0, 1), got ", config.p_target);
  return config;
}

std::string PipelineConfigToJson(const PipelineConfig& config) {
  json j;
  j["languages"] = config.languages;
  j["backend"] = BackendToJson(config.backend);
  j["optimizer"] = OptimizerToJson(config.optimizer);
  j["augment"] = json::parse(AugmentConfigToJson(config.augment));
  j["metrics"] = {{"p_target", config.p_target}};
  j["seed"] = config.seed;
  return j.dump(2);
}

PipelineConfig LoadPipelineConfig(const std::string& path) {
  std::ifstream in(path);
  LID_REQUIRE(in.good(), "cannot open config '", path, "'");
  std::ostringstream text;
  text << in.rdbuf();
  return PipelineConfigFromJson(text.str());
}

}  // namespace lid
