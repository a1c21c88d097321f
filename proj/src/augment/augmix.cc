// src/augment/augmix.cc

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

#include "augment/augmix.h"

#include <filesystem>
#include <fstream>
#include <limits>
#include <map>

#include <json.hpp>

#include "augment/audio_ops.h"
#include "base/error.h"
#include "base/rng.h"

namespace lid {

namespace {

// Resources loaded at the signal's rate, shared across paths of one call.
class ResourceCache {
 public:
  explicit ResourceCache(int sample_rate) : sample_rate_(sample_rate) {}

  const AudioBuffer& Get(const std::string& path) {
    auto it = cache_.find(path);
    if (it == cache_.end()) {
      it = cache_.emplace(path, LoadWav(path, sample_rate_)).first;
    }
    return it->second;
  }

 private:
  int sample_rate_;
  std::map<std::string, AudioBuffer> cache_;
};

AudioBuffer ApplyChain(const AudioBuffer& x,
                       const std::vector<TransformStep>& chain,
                       ResourceCache* resources) {
  AudioBuffer y = x;
  for (const TransformStep& step : chain) {
    switch (step.kind) {
      case TransformKind::kReverb:
        y = ApplyReverb(y, resources->Get(step.resource));
        break;
      case TransformKind::kNoise:
        y = ApplyNoise(y, resources->Get(step.resource), step.snr_db,
                       step.offset_fraction);
        break;
      case TransformKind::kSpeed:
        y = ApplySpeed(y, step.speed_factor);
        break;
    }
  }
  // Speed steps change the length; restore len(x) for mixing.
  if (y.samples.size() > x.samples.size()) {
    y.samples.resize(x.samples.size());
  } else if (y.samples.size() < x.samples.size()) {
    y.samples.resize(x.samples.size(), 0.0);
  }
  return y;
}

}  // namespace

AudioBuffer AugMix(const AudioBuffer& x, const AugmentPlan& plan) {
  Validate(x);
  Validate(plan, std::numeric_limits<int>::max());
  // Exact clean endpoint, independent of path contents or resources.
  if (plan.interp_m == 0.0) return x;

  ResourceCache resources(x.sample_rate);
  std::vector<double> mix(x.samples.size(), 0.0);
  for (size_t p = 0; p < plan.paths.size(); ++p) {
    AudioBuffer path_out = ApplyChain(x, plan.paths[p], &resources);
    for (size_t i = 0; i < mix.size(); ++i) {
      mix[i] += plan.path_weights[p] * path_out.samples[i];
    }
  }
  AudioBuffer out;
  out.sample_rate = x.sample_rate;
  out.samples.resize(x.samples.size());
  const double m = plan.interp_m;
  for (size_t i = 0; i < out.samples.size(); ++i) {
    double s = (1.0 - m) * x.samples[i] + m * mix[i];
    out.samples[i] = s < -1.0 ? -1.0 : (s > 1.0 ? 1.0 : s);
  }
  return out;
}

std::vector<AugmentedFile> RunAugmentBatch(
    const std::vector<Utterance>& utterances, const AugmentConfig& config,
    const std::string& out_dir) {
  Validate(config);
  LID_REQUIRE(!utterances.empty(), "no utterances to augment");
  std::filesystem::create_directories(out_dir);

  std::vector<AugmentedFile> outputs;
  std::string log_path = out_dir + "/plans.jsonl";
  std::ofstream log(log_path, std::ios::trunc);
  LID_REQUIRE(log.good(), "cannot open '", log_path, "' for writing");

  for (const Utterance& utt : utterances) {
    LID_REQUIRE(utt.audio_path.has_value(), "utterance '", utt.id,
                "' has no audio path");
    LID_REQUIRE(utt.id.find('/') == std::string::npos,
                "utterance id '", utt.id, "' cannot name an output file");
    AudioBuffer x = LoadWav(*utt.audio_path, kDefaultSampleRate);

    AugmentedFile result;
    result.id = utt.id;
    result.plan = SamplePlan(config, DeriveSeed(config.seed, utt.id));
    result.wav_path = out_dir + "/" + utt.id + ".wav";
    WriteWav(result.wav_path, AugMix(x, result.plan));
    nlohmann::json record;
    record["id"] = utt.id;
    record["output"] = result.wav_path;
    record["plan"] = nlohmann::json::parse(AugmentPlanToJson(result.plan));
    log << record.dump() << "\n";
    outputs.push_back(std::move(result));
  }
  LID_REQUIRE(log.good(), "failed while writing '", log_path, "'");
  return outputs;
}

}  // namespace lid
