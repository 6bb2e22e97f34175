// Copyright 2026 The bnasr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BNASR_AUDIO_H_
#define BNASR_AUDIO_H_

#include <string>
#include <string_view>
#include <vector>

namespace bnasr {

struct Waveform {
  std::vector<double> samples;  // amplitudes in [-1, 1]
  int sample_rate_hz = 16000;

  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

// RIFF/WAVE, PCM 16-bit signed little-endian, mono. Samples are scaled by
// 1/32768. Unknown chunks are skipped.
Waveform LoadWav(std::string_view bytes);

// Inverse of LoadWav: round(x * 32768) clamped to the int16 range.
std::string SerializeWav(const Waveform &w);

// Linear interpolation at source positions i * source / target, clamped to
// the last sample. Output length is round-half-up(len * target / source).
Waveform ResampleLinear(const Waveform &w, int target_hz);

// Drops leading and trailing samples with |x| < max|x| / divisor. Samples
// equal to the threshold are kept. Throws ArgumentError on empty or
// all-zero input.
Waveform TrimSilence(const Waveform &w, double divisor = 30.0);

// min_s <= duration <= max_s, inclusive on both ends.
bool DurationOk(const Waveform &w, double min_s, double max_s);

}  // namespace bnasr

#endif  // BNASR_AUDIO_H_
