// src/augment/plan.h

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

#ifndef LIDKIT_AUGMENT_PLAN_H_
#define LIDKIT_AUGMENT_PLAN_H_

#include <cstdint>
#include <string>
#include <vector>

namespace lid {

enum class TransformKind { kReverb, kNoise, kSpeed };

const char* TransformKindName(TransformKind kind);
TransformKind TransformKindFromName(const std::string& name);

struct AugmentConfig {
  int n_paths = 3;
  int max_chain_len = 3;
  // Speed perturbation is available but not enabled by default.
  std::vector<TransformKind> transforms = {TransformKind::kReverb,
                                           TransformKind::kNoise};
  double snr_low_db = 0.0;
  double snr_high_db = 15.0;
  std::vector<double> speed_factors = {0.9, 1.0, 1.1};
  double dirichlet_alpha = 1.0;
  double beta_alpha = 1.0;
  std::string rir_dir;
  std::string noise_dir;
  std::uint64_t seed = 0;
};

void Validate(const AugmentConfig& config);

// Strict JSON round trip; unknown keys are an error.
AugmentConfig AugmentConfigFromJson(const std::string& json_text);
std::string AugmentConfigToJson(const AugmentConfig& config);

// One concrete transform application. Only the fields of `kind` are
// meaningful: reverb uses resource; noise uses resource, snr_db and
// offset_fraction; speed uses speed_factor.
struct TransformStep {
  TransformKind kind = TransformKind::kReverb;
  std::string resource;
  double snr_db = 0.0;
  double offset_fraction = 0.0;
  double speed_factor = 1.0;
};

struct AugmentPlan {
  std::vector<std::vector<TransformStep>> paths;  // chains, length >= 1 each
  std::vector<double> path_weights;               // simplex vector
  double interp_m = 0.0;  // weight of the augmented mixture; 0 means clean
  std::uint64_t seed = 0;
};

void Validate(const AugmentPlan& plan, int max_chain_len);

// Serialized per output file as one JSONL record for reproducibility.
std::string AugmentPlanToJson(const AugmentPlan& plan);
AugmentPlan AugmentPlanFromJson(const std::string& json_text);

// Draws a fully concrete plan from the config. Fixed sampling order: per
// path, chain length then each step (transform kind, then its parameters);
// then path weights, then m. A seed reproduces the plan exactly. Resource
// files are the sorted *.wav listing of the transform's directory; an
// empty listing for an enabled transform is an error naming it.
AugmentPlan SamplePlan(const AugmentConfig& config, std::uint64_t seed);

}  // namespace lid

#endif  // LIDKIT_AUGMENT_PLAN_H_
