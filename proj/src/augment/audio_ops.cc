// src/augment/audio_ops.cc

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

#include "augment/audio_ops.h"

#include <cmath>

#include "base/error.h"
#include "base/parallel.h"

namespace lid {

namespace {

constexpr int kSincTaps = 32;  // kernel half-width in input samples

double Clip(double s) { return s < -1.0 ? -1.0 : (s > 1.0 ? 1.0 : s); }

double ConvolveAt(const std::vector<double>& x,
                  const std::vector<double>& kernel, int64_t i) {
  // y[i] = sum_j kernel[j] * x[i - j], fixed ascending-j order.
  int64_t j_lo = std::max<int64_t>(0, i - static_cast<int64_t>(x.size()) + 1);
  int64_t j_hi = std::min<int64_t>(static_cast<int64_t>(kernel.size()) - 1, i);
  double acc = 0.0;
  for (int64_t j = j_lo; j <= j_hi; ++j) {
    acc += kernel[j] * x[i - j];
  }
  return acc;
}

std::vector<double> ConvolveImpl(const std::vector<double>& x,
                                 const std::vector<double>& kernel,
                                 bool parallel) {
  LID_REQUIRE(!x.empty(), "cannot convolve an empty signal");
  LID_REQUIRE(!kernel.empty(), "cannot convolve with an empty kernel");
  std::vector<double> out(x.size());
  auto body = [&](int64_t i) { out[i] = ConvolveAt(x, kernel, i); };
  if (parallel) {
    ParallelFor(static_cast<int64_t>(x.size()), body);
  } else {
    for (int64_t i = 0; i < static_cast<int64_t>(x.size()); ++i) body(i);
  }
  return out;
}

// Hann-windowed sinc evaluated at the cutoff-scaled position v = cutoff*u
// (u in input samples); support |v| < kSincTaps, so downsampling dilates
// the kernel by 1/cutoff in sample units.
double SincKernel(double v, double cutoff) {
  double av = std::abs(v);
  if (av >= kSincTaps) return 0.0;
  double window = 0.5 * (1.0 + std::cos(M_PI * av / kSincTaps));
  if (av < 1e-12) return cutoff * window;
  double t = M_PI * v;
  return cutoff * (std::sin(t) / t) * window;
}

std::vector<double> SincResampleImpl(const std::vector<double>& in,
                                     int64_t out_len, double step,
                                     bool parallel) {
  LID_REQUIRE(!in.empty(), "cannot resample an empty signal");
  LID_REQUIRE(out_len >= 1, "resampled output would be empty");
  LID_REQUIRE(step > 0.0, "resampling step must be positive");
  const double cutoff = step > 1.0 ? 1.0 / step : 1.0;
  const int64_t n = static_cast<int64_t>(in.size());
  // Wider support when downsampling: the kernel is dilated by 1/cutoff.
  const int64_t reach = static_cast<int64_t>(std::ceil(kSincTaps / cutoff));
  std::vector<double> out(out_len);
  auto body = [&](int64_t i) {
    double pos = static_cast<double>(i) * step;
    int64_t center = static_cast<int64_t>(std::floor(pos));
    int64_t j_lo = std::max<int64_t>(0, center - reach);
    int64_t j_hi = std::min<int64_t>(n - 1, center + reach + 1);
    double acc = 0.0;
    for (int64_t j = j_lo; j <= j_hi; ++j) {
      acc += in[j] *
             SincKernel((pos - static_cast<double>(j)) * cutoff, cutoff);
    }
    out[i] = acc;
  };
  if (parallel) {
    ParallelFor(out_len, body);
  } else {
    for (int64_t i = 0; i < out_len; ++i) body(i);
  }
  return out;
}

}  // namespace

double Rms(const std::vector<double>& samples) {
  LID_REQUIRE(!samples.empty(), "RMS of an empty buffer is undefined");
  std::vector<double> squares(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    squares[i] = samples[i] * samples[i];
  }
  return std::sqrt(PairwiseSum(squares.data(),
                               static_cast<int64_t>(squares.size())) /
                   static_cast<double>(samples.size()));
}

std::vector<double> ConvolveTruncated(const std::vector<double>& x,
                                      const std::vector<double>& kernel) {
  return ConvolveImpl(x, kernel, /*parallel=*/true);
}

std::vector<double> ConvolveTruncatedSerial(const std::vector<double>& x,
                                            const std::vector<double>& kernel) {
  return ConvolveImpl(x, kernel, /*parallel=*/false);
}

AudioBuffer ApplyReverb(const AudioBuffer& x, const AudioBuffer& rir) {
  Validate(x);
  Validate(rir);
  LID_REQUIRE(x.sample_rate == rir.sample_rate,
              "signal rate ", x.sample_rate, " Hz does not match impulse ",
              "response rate ", rir.sample_rate, " Hz");
  AudioBuffer out;
  out.sample_rate = x.sample_rate;
  out.samples = ConvolveTruncated(x.samples, rir.samples);
  double out_rms = Rms(out.samples);
  double in_rms = Rms(x.samples);
  // An RIR can carry arbitrary gain; restore the input level so later SNR
  // targets stay meaningful. A silent result stays silent.
  if (out_rms > 0.0 && in_rms > 0.0) {
    double gain = in_rms / out_rms;
    for (double& s : out.samples) s = Clip(s * gain);
  }
  return out;
}

AudioBuffer ApplyNoise(const AudioBuffer& x, const AudioBuffer& noise,
                       double snr_db, double offset_fraction) {
  Validate(x);
  Validate(noise);
  LID_REQUIRE(x.sample_rate == noise.sample_rate,
              "signal rate ", x.sample_rate, " Hz does not match noise ",
              "rate ", noise.sample_rate, " Hz");
  LID_REQUIRE(offset_fraction >= 0.0 && offset_fraction < 1.0,
              "noise offset fraction must lie in [0, 1), got ",
              offset_fraction);
  double noise_rms = Rms(noise.samples);
  LID_REQUIRE(noise_rms > 0.0, "noise buffer is silent; SNR is undefined");
  double signal_rms = Rms(x.samples);
  // 20 log10(signal_rms / (gain * noise_rms)) = snr_db.
  double gain = signal_rms / (noise_rms * std::pow(10.0, snr_db / 20.0));

  const size_t n = noise.samples.size();
  size_t offset = static_cast<size_t>(offset_fraction * n);
  AudioBuffer out;
  out.sample_rate = x.sample_rate;
  out.samples.resize(x.samples.size());
  for (size_t i = 0; i < x.samples.size(); ++i) {
    double v = noise.samples[(offset + i) % n];
    out.samples[i] = Clip(x.samples[i] + gain * v);
  }
  return out;
}

std::vector<double> SincResample(const std::vector<double>& in,
                                 int64_t out_len, double step) {
  return SincResampleImpl(in, out_len, step, /*parallel=*/true);
}

std::vector<double> SincResampleSerial(const std::vector<double>& in,
                                       int64_t out_len, double step) {
  return SincResampleImpl(in, out_len, step, /*parallel=*/false);
}

AudioBuffer ApplySpeed(const AudioBuffer& x, double factor) {
  Validate(x);
  LID_REQUIRE(factor > 0.0, "speed factor must be positive, got ", factor);
  if (factor == 1.0) return x;  // bit-exact identity
  int64_t out_len =
      std::llround(static_cast<double>(x.samples.size()) / factor);
  LID_REQUIRE(out_len >= 1, "speed factor ", factor, " on ",
              x.samples.size(), " samples would produce an empty buffer");
  AudioBuffer out;
  out.sample_rate = x.sample_rate;
  out.samples = SincResample(x.samples, out_len, factor);
  for (double& s : out.samples) s = Clip(s);
  return out;
}

AudioBuffer ResampleRate(const AudioBuffer& x, int target_rate) {
  Validate(x);
  LID_REQUIRE(target_rate > 0, "target rate must be positive");
  if (x.sample_rate == target_rate) return x;
  double step = static_cast<double>(x.sample_rate) / target_rate;
  int64_t out_len = std::llround(static_cast<double>(x.samples.size()) *
                                 target_rate / x.sample_rate);
  LID_REQUIRE(out_len >= 1, "resampling ", x.samples.size(), " samples to ",
              target_rate, " Hz would produce an empty buffer");
  AudioBuffer out;
  out.sample_rate = target_rate;
  out.samples = SincResample(x.samples, out_len, step);
  for (double& s : out.samples) s = Clip(s);
  return out;
}

}  // namespace lid
