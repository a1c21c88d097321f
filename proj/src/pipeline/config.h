// src/pipeline/config.h

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

#ifndef LIDKIT_PIPELINE_CONFIG_H_
#define LIDKIT_PIPELINE_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "augment/plan.h"
#include "backend/backend.h"
#include "fusion/lbfgs.h"

namespace lid {

// Top-level configuration shared by the CLI subcommands. Every section is
// optional and falls back to module defaults; unknown keys anywhere are an
// error.
struct PipelineConfig {
  std::vector<std::string> languages;
  BackendConfig backend;
  OptimizerConfig optimizer;
  AugmentConfig augment;
  double p_target = 0.5;
  std::uint64_t seed = 0;
};

PipelineConfig PipelineConfigFromJson(const std::string& json_text);
std::string PipelineConfigToJson(const PipelineConfig& config);

PipelineConfig LoadPipelineConfig(const std::string& path);

}  // namespace lid

#endif  // LIDKIT_PIPELINE_CONFIG_H_
