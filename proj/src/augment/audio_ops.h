// src/augment/audio_ops.h

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

#ifndef LIDKIT_AUGMENT_AUDIO_OPS_H_
#define LIDKIT_AUGMENT_AUDIO_OPS_H_

#include <cstdint>
#include <vector>

#include "augment/wav_io.h"

namespace lid {

double Rms(const std::vector<double>& samples);

// Linear convolution truncated to x.size() outputs. Parallel over output
// samples; each sample sums its taps in a fixed order, so results are
// bitwise identical to ConvolveTruncatedSerial at any thread count.
std::vector<double> ConvolveTruncated(const std::vector<double>& x,
                                      const std::vector<double>& kernel);
std::vector<double> ConvolveTruncatedSerial(const std::vector<double>& x,
                                            const std::vector<double>& kernel);

// Convolves with the impulse response, rescales to the input RMS, and
// clips to [-1, 1]. Sample rates must match.
AudioBuffer ApplyReverb(const AudioBuffer& x, const AudioBuffer& rir);

// Adds the noise (looped from offset_fraction of its length) scaled so the
// signal-to-noise ratio is snr_db; the sum is clipped to [-1, 1]. Throws
// on a silent noise buffer.
AudioBuffer ApplyNoise(const AudioBuffer& x, const AudioBuffer& noise,
                       double snr_db, double offset_fraction);

// Windowed-sinc resampling: out[i] interpolates the input at position
// i * step with a Hann-windowed sinc kernel, cutoff min(1, 1/step) for
// anti-aliasing. Parallel over outputs, bitwise equal to the serial form.
std::vector<double> SincResample(const std::vector<double>& in,
                                 int64_t out_len, double step);
std::vector<double> SincResampleSerial(const std::vector<double>& in,
                                       int64_t out_len, double step);

// Speed perturbation: round(len/factor) samples at the same rate (tempo
// and pitch shift together). factor 1.0 is an exact copy.
AudioBuffer ApplySpeed(const AudioBuffer& x, double factor);

// Sample-rate conversion; output length round(len * target/source).
AudioBuffer ResampleRate(const AudioBuffer& x, int target_rate);

}  // namespace lid

#endif  // LIDKIT_AUGMENT_AUDIO_OPS_H_
