// src/augment/wav_io.h

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

#ifndef LIDKIT_AUGMENT_WAV_IO_H_
#define LIDKIT_AUGMENT_WAV_IO_H_

#include <string>
#include <vector>

namespace lid {

constexpr int kDefaultSampleRate = 16000;

struct AudioBuffer {
  std::vector<double> samples;  // amplitudes in [-1, 1]
  int sample_rate = kDefaultSampleRate;
};

void Validate(const AudioBuffer& buffer);

// Reads a RIFF WAV file; only mono 16-bit PCM payloads are accepted.
// Unknown chunks are skipped. Samples map to doubles as s / 32768.
AudioBuffer ReadWav(const std::string& path);

// Reads a WAV file and resamples to target_rate when the file rate
// differs. Reading then writing an untouched 16 kHz buffer is
// byte-identical.
AudioBuffer LoadWav(const std::string& path, int target_rate);

// Writes mono 16-bit PCM; doubles map to round(x * 32768) clamped to the
// int16 range.
void WriteWav(const std::string& path, const AudioBuffer& buffer);

}  // namespace lid

#endif  // LIDKIT_AUGMENT_WAV_IO_H_
