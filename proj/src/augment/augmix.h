// src/augment/augmix.h

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

#ifndef LIDKIT_AUGMENT_AUGMIX_H_
#define LIDKIT_AUGMENT_AUGMIX_H_

#include <string>
#include <vector>

#include "augment/plan.h"
#include "augment/wav_io.h"
#include "core/types.h"

namespace lid {

// out = clip((1 - m) * x + m * sum_i w_i * path_i(x)).
// Each path applies its transform chain serially; a chain whose speed steps
// change the length is cropped or zero-padded back to len(x) before
// mixing, so the output length always equals the input length. m == 0
// returns the input bit-for-bit without touching any resources.
AudioBuffer AugMix(const AudioBuffer& x, const AugmentPlan& plan);

struct AugmentedFile {
  std::string id;
  std::string wav_path;
  AugmentPlan plan;
};

// Augments every manifest utterance into out_dir/<id>.wav and returns the
// outputs in manifest order. Each utterance draws its own RNG stream from
// (config.seed, id), so results do not depend on processing order. The
// plan of every output is appended to out_dir/plans.jsonl.
std::vector<AugmentedFile> RunAugmentBatch(
    const std::vector<Utterance>& utterances, const AugmentConfig& config,
    const std::string& out_dir);

}  // namespace lid

#endif  // LIDKIT_AUGMENT_AUGMIX_H_
