// tests/test_augment.cc

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

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <vector>

#include "augment/audio_ops.h"
#include "augment/augmix.h"
#include "augment/plan.h"
#include "augment/wav_io.h"
#include "base/parallel.h"
#include "base/rng.h"
#include "testutil.h"

using namespace lid;
using namespace lid::testing;
using doctest::Approx;
using doctest::Contains;

namespace {

AudioBuffer Sine(double freq_hz, double amplitude, int n,
                 int rate = kDefaultSampleRate) {
  AudioBuffer b;
  b.sample_rate = rate;
  b.samples.resize(n);
  for (int i = 0; i < n; i++)
    b.samples[i] = amplitude * std::sin(2.0 * M_PI * freq_hz * i / rate);
  return b;
}

AudioBuffer RandomAudio(int n, double amplitude, Rng* rng,
                        int rate = kDefaultSampleRate) {
  AudioBuffer b;
  b.sample_rate = rate;
  b.samples.resize(n);
  for (int i = 0; i < n; i++)
    b.samples[i] = amplitude * (2.0 * rng->Uniform() - 1.0);
  return b;
}

// Magnitude of the DFT projection at an arbitrary frequency.
double SpectralMagnitude(const AudioBuffer& b, double freq_hz) {
  double re = 0.0, im = 0.0;
  for (size_t i = 0; i < b.samples.size(); i++) {
    double phase = 2.0 * M_PI * freq_hz * i / b.sample_rate;
    re += b.samples[i] * std::cos(phase);
    im += b.samples[i] * std::sin(phase);
  }
  return std::hypot(re, im);
}

double PeakFrequency(const AudioBuffer& b, double lo_hz, double hi_hz,
                     double step_hz) {
  double best_f = lo_hz, best_mag = -1.0;
  for (double f = lo_hz; f <= hi_hz; f += step_hz) {
    double mag = SpectralMagnitude(b, f);
    if (mag > best_mag) {
      best_mag = mag;
      best_f = f;
    }
  }
  return best_f;
}

// Minimal RIFF writer used to craft malformed or exotic files.
std::string WavBlob(int channels, int bits, int rate,
                    const std::vector<std::int16_t>& payload,
                    bool junk_chunk) {
  std::string b;
  auto u32 = [&b](std::uint32_t v) {
    char c[4];
    std::memcpy(c, &v, 4);
    b.append(c, 4);
  };
  auto u16 = [&b](std::uint16_t v) {
    char c[2];
    std::memcpy(c, &v, 2);
    b.append(c, 2);
  };
  b += "RIFF";
  u32(0);  // patched below
  b += "WAVE";
  if (junk_chunk) {
    b += "LIST";
    u32(5);
    b += "INFOx";
    b.push_back('\0');  // chunk payloads are word-aligned
  }
  b += "fmt ";
  u32(16);
  u16(1);  // PCM
  u16(static_cast<std::uint16_t>(channels));
  u32(static_cast<std::uint32_t>(rate));
  u32(static_cast<std::uint32_t>(rate * channels * bits / 8));
  u16(static_cast<std::uint16_t>(channels * bits / 8));
  u16(static_cast<std::uint16_t>(bits));
  b += "data";
  u32(static_cast<std::uint32_t>(payload.size() * 2));
  for (std::int16_t s : payload) {
    char c[2];
    std::memcpy(c, &s, 2);
    b.append(c, 2);
  }
  std::uint32_t riff_size = static_cast<std::uint32_t>(b.size() - 8);
  std::memcpy(&b[4], &riff_size, 4);
  return b;
}

AugmentConfig ResourcelessConfig() {
  AugmentConfig config;
  config.transforms = {TransformKind::kSpeed};
  config.rir_dir.clear();
  config.noise_dir.clear();
  return config;
}

}  // namespace

TEST_SUITE("augment") {

TEST_CASE("wav io round-trips quantized samples exactly") {
  TempDir dir;
  Rng rng(81);
  AudioBuffer b = RandomAudio(777, 0.8, &rng);
  WriteWav(dir.Path("a.wav"), b);
  AudioBuffer once = ReadWav(dir.Path("a.wav"));
  REQUIRE(once.samples.size() == b.samples.size());
  CHECK(once.sample_rate == kDefaultSampleRate);
  // One quantization to the int16 grid, then stable forever.
  for (size_t i = 0; i < b.samples.size(); i++)
    CHECK(std::abs(once.samples[i] - b.samples[i]) <= 0.5 / 32768.0);
  WriteWav(dir.Path("b.wav"), once);
  AudioBuffer twice = ReadWav(dir.Path("b.wav"));
  CHECK(twice.samples == once.samples);
  CHECK(ReadFileBytes(dir.Path("a.wav")) == ReadFileBytes(dir.Path("b.wav")));
}

TEST_CASE("wav reader skips unknown chunks and rejects exotic formats") {
  TempDir dir;
  std::vector<std::int16_t> payload = {0, 1000, -1000, 32767, -32768};

  WriteTextFile(dir.Path("junk.wav"), WavBlob(1, 16, 16000, payload, true));
  AudioBuffer ok = ReadWav(dir.Path("junk.wav"));
  REQUIRE(ok.samples.size() == 5);
  CHECK(ok.samples[1] == Approx(1000.0 / 32768.0).epsilon(1e-15));
  CHECK(ok.samples[3] == Approx(32767.0 / 32768.0).epsilon(1e-15));

  WriteTextFile(dir.Path("stereo.wav"), WavBlob(2, 16, 16000, payload, false));
  CHECK_THROWS_WITH_AS(ReadWav(dir.Path("stereo.wav")), Contains("channel"),
                       std::runtime_error);

  WriteTextFile(dir.Path("not.wav"), "RIFXjunkdata");
  CHECK_THROWS_AS(ReadWav(dir.Path("not.wav")), std::runtime_error);
}

TEST_CASE("load wav resamples only when rates differ") {
  TempDir dir;
  AudioBuffer b = Sine(440.0, 0.4, 8000, 8000);
  WriteWav(dir.Path("a.wav"), b);
  AudioBuffer same = LoadWav(dir.Path("a.wav"), 8000);
  CHECK(same.samples.size() == 8000);
  AudioBuffer up = LoadWav(dir.Path("a.wav"), 16000);
  CHECK(up.sample_rate == 16000);
  CHECK(up.samples.size() == 16000);
}

TEST_CASE("rms of simple signals") {
  std::vector<double> alternating = {1.0, -1.0, 1.0, -1.0};
  CHECK(Rms(alternating) == 1.0);
  std::vector<double> halves = {0.5, 0.5};
  CHECK(Rms(halves) == 0.5);
  std::vector<double> empty;
  CHECK_THROWS_AS(Rms(empty), std::runtime_error);
}

TEST_CASE("truncated convolution with impulses") {
  std::vector<double> x = {0.1, 0.2, 0.3, 0.4, 0.5};
  std::vector<double> delta = {1.0};
  CHECK(ConvolveTruncated(x, delta) == x);

  std::vector<double> delayed = {0.0, 0.0, 1.0};
  std::vector<double> shifted = ConvolveTruncated(x, delayed);
  REQUIRE(shifted.size() == x.size());
  CHECK(shifted[0] == 0.0);
  CHECK(shifted[1] == 0.0);
  for (size_t i = 2; i < x.size(); i++) CHECK(shifted[i] == x[i - 2]);
}

TEST_CASE("parallel convolution is bitwise identical to serial") {
  Rng rng(82);
  AudioBuffer x = RandomAudio(4000, 0.5, &rng);
  AudioBuffer ker = RandomAudio(300, 0.3, &rng);
  int saved = MaxThreads();
  SetThreads(4);
  auto par = ConvolveTruncated(x.samples, ker.samples);
  auto ser = ConvolveTruncatedSerial(x.samples, ker.samples);
  SetThreads(saved);
  CHECK(par == ser);
}

TEST_CASE("reverb with a unit impulse is the identity") {
  Rng rng(83);
  AudioBuffer x = RandomAudio(2000, 0.5, &rng);
  AudioBuffer rir;
  rir.samples = {1.0};
  AudioBuffer out = ApplyReverb(x, rir);
  CHECK(out.samples == x.samples);
}

TEST_CASE("reverb with a delayed impulse shifts and restores rms") {
  Rng rng(84);
  AudioBuffer x = RandomAudio(3000, 0.3, &rng);
  AudioBuffer rir;
  rir.samples.assign(11, 0.0);
  rir.samples[10] = 1.0;
  AudioBuffer out = ApplyReverb(x, rir);
  REQUIRE(out.samples.size() == x.samples.size());
  // Constant gain times the shifted signal.
  double gain = out.samples[10] / x.samples[0];
  CHECK(gain > 1.0);  // truncation lost tail energy, so the gain compensates
  for (size_t i = 10; i < out.samples.size(); i++)
    CHECK(out.samples[i] == Approx(gain * x.samples[i - 10]).epsilon(1e-12));
  CHECK(Rms(out.samples) == Approx(Rms(x.samples)).epsilon(1e-9));
}

TEST_CASE("reverb with a random rir preserves rms before clipping") {
  Rng rng(85);
  AudioBuffer x = RandomAudio(4000, 0.05, &rng);
  AudioBuffer rir = RandomAudio(200, 0.2, &rng);
  AudioBuffer out = ApplyReverb(x, rir);
  CHECK(Rms(out.samples) == Approx(Rms(x.samples)).epsilon(1e-6));
  CHECK(ApplyReverb(x, rir).samples == out.samples);  // deterministic
}

TEST_CASE("reverb rejects mismatched sample rates") {
  Rng rng(86);
  AudioBuffer x = RandomAudio(100, 0.1, &rng, 16000);
  AudioBuffer rir = RandomAudio(10, 0.1, &rng, 8000);
  CHECK_THROWS_AS(ApplyReverb(x, rir), std::runtime_error);
}

TEST_CASE("noise mixing hits the requested snr") {
  Rng rng(87);
  AudioBuffer x = RandomAudio(5000, 0.12, &rng);
  AudioBuffer noise = RandomAudio(5000, 0.5, &rng);

  for (double snr : {0.0, 6.02, 15.0}) {
    AudioBuffer out = ApplyNoise(x, noise, snr, 0.25);
    std::vector<double> added(x.samples.size());
    for (size_t i = 0; i < added.size(); i++)
      added[i] = out.samples[i] - x.samples[i];
    double achieved = 20.0 * std::log10(Rms(x.samples) / Rms(added));
    CHECK(std::abs(achieved - snr) < 0.01);  // within 0.01 dB
  }

  // snr 6.02 dB puts the noise very close to half the signal amplitude.
  AudioBuffer half = ApplyNoise(x, noise, 6.02, 0.0);
  std::vector<double> added(x.samples.size());
  for (size_t i = 0; i < added.size(); i++)
    added[i] = half.samples[i] - x.samples[i];
  CHECK(Rms(added) == Approx(0.5 * Rms(x.samples)).epsilon(2e-3));
}

TEST_CASE("very high snr leaves the signal nearly untouched") {
  Rng rng(88);
  AudioBuffer x = RandomAudio(3000, 0.3, &rng);
  AudioBuffer noise = RandomAudio(3000, 0.4, &rng);
  AudioBuffer out = ApplyNoise(x, noise, 100.0, 0.0);
  std::vector<double> diff(x.samples.size());
  for (size_t i = 0; i < diff.size(); i++)
    diff[i] = out.samples[i] - x.samples[i];
  CHECK(Rms(diff) < 1e-4 * Rms(x.samples));
}

TEST_CASE("noise mixing wraps around the offset") {
  AudioBuffer x;
  x.samples.assign(4, 0.0);
  x.samples[0] = 0.5;  // non-silent so SNR is defined
  AudioBuffer noise;
  noise.samples = {0.1, 0.2, 0.3, 0.4};
  AudioBuffer out = ApplyNoise(x, noise, 0.0, 0.5);
  // Offset starts at index 2 and wraps: slice (0.3, 0.4, 0.1, 0.2).
  double gain = (out.samples[2] - x.samples[2]) / noise.samples[0];
  CHECK(out.samples[0] - x.samples[0] ==
        Approx(gain * noise.samples[2]).epsilon(1e-12));
  CHECK(out.samples[3] - x.samples[3] ==
        Approx(gain * noise.samples[1]).epsilon(1e-12));
}

TEST_CASE("silent noise is rejected") {
  Rng rng(89);
  AudioBuffer x = RandomAudio(100, 0.1, &rng);
  AudioBuffer silent;
  silent.samples.assign(50, 0.0);
  CHECK_THROWS_WITH_AS(ApplyNoise(x, silent, 10.0, 0.0), Contains("silent"),
                       std::runtime_error);
}

TEST_CASE("speed factor one is a bit-exact copy") {
  Rng rng(90);
  AudioBuffer x = RandomAudio(1234, 0.7, &rng);
  AudioBuffer out = ApplySpeed(x, 1.0);
  CHECK(out.samples == x.samples);
  CHECK(out.sample_rate == x.sample_rate);
}

TEST_CASE("speed 0.9 stretches 9000 samples to 10000") {
  Rng rng(91);
  AudioBuffer x = RandomAudio(9000, 0.4, &rng);
  CHECK(ApplySpeed(x, 0.9).samples.size() == 10000);
  CHECK(ApplySpeed(x, 1.1).samples.size() == 8182);  // round(9000/1.1)
}

TEST_CASE("speed perturbation shifts a sine's pitch proportionally") {
  AudioBuffer x = Sine(200.0, 0.5, 16000);
  AudioBuffer fast = ApplySpeed(x, 1.1);
  REQUIRE(fast.samples.size() == 14545);
  double peak = PeakFrequency(fast, 170.0, 280.0, 0.5);
  CHECK(std::abs(peak - 220.0) / 220.0 < 0.01);

  AudioBuffer slow = ApplySpeed(x, 0.9);
  double slow_peak = PeakFrequency(slow, 150.0, 250.0, 0.5);
  CHECK(std::abs(slow_peak - 180.0) / 180.0 < 0.01);
}

TEST_CASE("speed rejects outputs that would be empty") {
  AudioBuffer x;
  x.samples = {0.5};
  CHECK_THROWS_WITH_AS(ApplySpeed(x, 10.0), Contains("empty"),
                       std::runtime_error);
}

TEST_CASE("rate resampling doubles the sample count from 8k to 16k") {
  AudioBuffer x = Sine(400.0, 0.4, 4000, 8000);
  AudioBuffer up = ResampleRate(x, 16000);
  CHECK(up.sample_rate == 16000);
  CHECK(up.samples.size() == 8000);
  double peak = PeakFrequency(up, 300.0, 500.0, 1.0);
  CHECK(std::abs(peak - 400.0) / 400.0 < 0.01);

  AudioBuffer same = ResampleRate(x, 8000);
  CHECK(same.samples == x.samples);
}

TEST_CASE("parallel resampling is bitwise identical to serial") {
  Rng rng(92);
  AudioBuffer x = RandomAudio(6000, 0.5, &rng);
  int saved = MaxThreads();
  SetThreads(4);
  auto par = SincResample(x.samples, 5000, 1.2);
  auto ser = SincResampleSerial(x.samples, 5000, 1.2);
  SetThreads(saved);
  CHECK(par == ser);
}

TEST_CASE("sample plans are reproducible and valid") {
  TempDir dir;
  Rng seed_rng(93);
  // Real resource files so the plan can reference them.
  AudioBuffer rir = RandomAudio(64, 0.2, &seed_rng);
  AudioBuffer noise = RandomAudio(256, 0.4, &seed_rng);
  WriteWav(dir.Path("r0.wav"), rir);
  WriteWav(dir.Path("n0.wav"), noise);

  AugmentConfig config;
  config.rir_dir = dir.Path();
  config.noise_dir = dir.Path();
  config.n_paths = 2;
  config.max_chain_len = 3;
  config.transforms = {TransformKind::kReverb, TransformKind::kNoise,
                       TransformKind::kSpeed};

  AugmentPlan plan = SamplePlan(config, 12345);
  Validate(plan, config.max_chain_len);
  CHECK(plan.paths.size() == 2);
  double wsum = 0.0;
  for (double w : plan.path_weights) {
    CHECK(w >= 0.0);
    wsum += w;
  }
  CHECK(wsum == Approx(1.0).epsilon(1e-12));
  CHECK(plan.interp_m >= 0.0);
  CHECK(plan.interp_m <= 1.0);
  for (const auto& path : plan.paths) {
    CHECK(path.size() >= 1);
    CHECK(path.size() <= 3);
    for (const auto& step : path) {
      if (step.kind == TransformKind::kNoise) {
        CHECK(step.snr_db >= config.snr_low_db);
        CHECK(step.snr_db <= config.snr_high_db);
        CHECK(step.offset_fraction >= 0.0);
        CHECK(step.offset_fraction < 1.0);
      }
      if (step.kind == TransformKind::kSpeed) {
        bool known = false;
        for (double f : config.speed_factors) known = known || f == step.speed_factor;
        CHECK(known);
      }
    }
  }

  AugmentPlan again = SamplePlan(config, 12345);
  CHECK(AugmentPlanToJson(again) == AugmentPlanToJson(plan));
  AugmentPlan other = SamplePlan(config, 54321);
  CHECK(AugmentPlanToJson(other) != AugmentPlanToJson(plan));

  // JSON round trip is faithful.
  AugmentPlan back = AugmentPlanFromJson(AugmentPlanToJson(plan));
  CHECK(AugmentPlanToJson(back) == AugmentPlanToJson(plan));
}

TEST_CASE("an enabled transform with no resources is an error") {
  TempDir dir;  // empty: no *.wav anywhere
  AugmentConfig config;
  config.rir_dir = dir.Path();
  config.noise_dir = dir.Path();
  CHECK_THROWS_WITH_AS(SamplePlan(config, 1), Contains("reverb"),
                       std::runtime_error);
}

TEST_CASE("a huge dirichlet concentration pins weights to uniform") {
  TempDir dir;
  Rng setup(94);
  WriteWav(dir.Path("n0.wav"), RandomAudio(64, 0.3, &setup));
  AugmentConfig config;
  config.transforms = {TransformKind::kNoise};
  config.noise_dir = dir.Path();
  config.n_paths = 3;
  config.dirichlet_alpha = 1e6;
  for (std::uint64_t seed = 0; seed < 1000; seed++) {
    AugmentPlan plan = SamplePlan(config, seed);
    for (double w : plan.path_weights)
      CHECK(std::abs(w - 1.0 / 3.0) < 1e-2);
  }
}

TEST_CASE("augment config json round-trips and rejects unknown keys") {
  AugmentConfig config;
  config.n_paths = 4;
  config.snr_high_db = 20.0;
  config.transforms = {TransformKind::kNoise, TransformKind::kSpeed};
  AugmentConfig back = AugmentConfigFromJson(AugmentConfigToJson(config));
  CHECK(back.n_paths == 4);
  CHECK(back.snr_high_db == 20.0);
  CHECK(back.transforms == config.transforms);

  CHECK_THROWS_WITH_AS(AugmentConfigFromJson("{\"n_paths\": 2, \"oops\": 1}"),
                       Contains("oops"), std::runtime_error);
  CHECK_THROWS_AS(AugmentConfigFromJson("{\"n_paths\": 0}"),
                  std::runtime_error);
}

TEST_CASE("augmix with m zero returns the input bit-for-bit") {
  Rng rng(95);
  AudioBuffer x = RandomAudio(512, 0.6, &rng);
  AugmentPlan plan;
  TransformStep step;
  step.kind = TransformKind::kReverb;
  step.resource = "/nonexistent/rir.wav";  // must never be opened
  plan.paths = {{step}};
  plan.path_weights = {1.0};
  plan.interp_m = 0.0;
  AudioBuffer out = AugMix(x, plan);
  CHECK(out.samples == x.samples);
}

TEST_CASE("augmix with m one and a speed-1 path reproduces the input") {
  Rng rng(96);
  AudioBuffer x = RandomAudio(400, 0.5, &rng);
  AugmentPlan plan;
  TransformStep step;
  step.kind = TransformKind::kSpeed;
  step.speed_factor = 1.0;
  plan.paths = {{step}};
  plan.path_weights = {1.0};
  plan.interp_m = 1.0;
  AudioBuffer out = AugMix(x, plan);
  REQUIRE(out.samples.size() == x.samples.size());
  CHECK(out.samples == x.samples);
}

TEST_CASE("augmix pads or crops speed-changed paths to the input length") {
  Rng rng(97);
  AudioBuffer x = RandomAudio(1000, 0.4, &rng);
  for (double factor : {0.9, 1.1}) {
    AugmentPlan plan;
    TransformStep step;
    step.kind = TransformKind::kSpeed;
    step.speed_factor = factor;
    plan.paths = {{step}};
    plan.path_weights = {1.0};
    plan.interp_m = 0.5;
    AudioBuffer out = AugMix(x, plan);
    CHECK(out.samples.size() == x.samples.size());
    for (double s : out.samples) {
      CHECK(s <= 1.0);
      CHECK(s >= -1.0);
    }
  }
}

TEST_CASE("augment batch is byte-identical across runs") {
  TempDir resources;
  TempDir in_dir;
  TempDir out_a;
  TempDir out_b;
  Rng rng(98);
  WriteWav(resources.Path("r0.wav"), RandomAudio(32, 0.2, &rng));
  WriteWav(resources.Path("n0.wav"), RandomAudio(128, 0.4, &rng));
  WriteWav(resources.Path("n1.wav"), RandomAudio(96, 0.3, &rng));

  std::vector<Utterance> utts(3);
  for (int i = 0; i < 3; i++) {
    utts[i].id = "utt" + std::to_string(i);
    std::string wav = in_dir.Path(utts[i].id + ".wav");
    WriteWav(wav, RandomAudio(600 + 100 * i, 0.5, &rng));
    utts[i].audio_path = wav;
  }

  AugmentConfig config;
  config.rir_dir = resources.Path();
  config.noise_dir = resources.Path();
  config.seed = 424242;

  auto files_a = RunAugmentBatch(utts, config, out_a.Path());
  auto files_b = RunAugmentBatch(utts, config, out_b.Path());
  REQUIRE(files_a.size() == 3);
  REQUIRE(files_b.size() == 3);
  for (int i = 0; i < 3; i++) {
    CHECK(files_a[i].id == utts[i].id);
    CHECK(ReadFileBytes(files_a[i].wav_path) ==
          ReadFileBytes(files_b[i].wav_path));
    // Output length matches the input and stays in range.
    AudioBuffer out = ReadWav(files_a[i].wav_path);
    AudioBuffer in = ReadWav(*utts[i].audio_path);
    CHECK(out.samples.size() == in.samples.size());
    // Energy sanity: non-degenerate mixtures keep the signal audible.
    double ratio = Rms(out.samples) / Rms(in.samples);
    CHECK(ratio > 0.25);
    CHECK(ratio < 4.0);
  }
  // The plan log embeds each record's output path, which necessarily
  // differs between directories; normalize it before comparing bytes.
  std::string plans_a = ReadFileBytes(out_a.Path("plans.jsonl"));
  std::string plans_b = ReadFileBytes(out_b.Path("plans.jsonl"));
  size_t at = 0;
  while ((at = plans_b.find(out_b.Path(), at)) != std::string::npos) {
    plans_b.replace(at, out_b.Path().size(), out_a.Path());
    at += out_a.Path().size();
  }
  CHECK(plans_a == plans_b);

  // One JSONL record per utterance, each a valid plan.
  std::string plans = ReadFileBytes(out_a.Path("plans.jsonl"));
  int lines = 0;
  size_t pos = 0;
  while ((pos = plans.find('\n', pos)) != std::string::npos) {
    lines++;
    pos++;
  }
  CHECK(lines == 3);
}

TEST_CASE("augment batch requires audio paths") {
  AugmentConfig config = ResourcelessConfig();
  std::vector<Utterance> utts(1);
  utts[0].id = "u1";  // no audio_path
  TempDir out;
  CHECK_THROWS_WITH_AS(RunAugmentBatch(utts, config, out.Path()),
                       Contains("u1"), std::runtime_error);
}

}  // TEST_SUITE("augment")
