// src/pipeline/synthetic.h

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

#ifndef LIDKIT_PIPELINE_SYNTHETIC_H_
#define LIDKIT_PIPELINE_SYNTHETIC_H_

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "core/types.h"

namespace lid {

// Synthetic Gaussian embedding generator; stands in for the out-of-scope
// embedding extractors so the backend and metrics can run end to end.
struct SyntheticSpec {
  int n_languages = 2;
  int dim = 8;
  // Per-class sample counts; when empty, per_class_count applies to all.
  std::vector<int> per_class_counts;
  int per_class_count = 10;
  // Mean norm over expected noise norm (vector SNR). The angular spread of
  // a class is about atan(1/separation) at any dimension, so this one knob
  // sets difficulty regardless of dim.
  double class_separation = 3.0;
  double noise_scale = 1.0;  // per-coordinate Gaussian sigma
  std::uint64_t seed = 0;
};

struct SyntheticData {
  LanguageList languages;      // "lang00", "lang01", ...
  EmbeddingSet embeddings;     // ids "<prefix>_<lang>_<index>"
  Eigen::MatrixXd class_means;  // K x dim
};

// Class means are an orthogonal frame (random rotation, Gram-Schmidt) when
// dim >= n_languages, random unit directions otherwise, scaled to norm
// class_separation * sqrt(dim); samples add noise_scale * N(0, I).
// Deterministic in (spec, id_prefix).
SyntheticData GenerateSynthetic(const SyntheticSpec& spec,
                                const std::string& id_prefix);

}  // namespace lid

#endif  // LIDKIT_PIPELINE_SYNTHETIC_H_
