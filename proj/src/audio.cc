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

#include "bnasr/audio.h"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "bnasr/error.h"

namespace bnasr {

namespace {

std::uint32_t ReadU32(std::string_view b, std::size_t off) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(b[off])) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 1])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 2])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 3])) << 24;
}

std::uint16_t ReadU16(std::string_view b, std::size_t off) {
  return static_cast<std::uint16_t>(
      static_cast<unsigned char>(b[off]) |
      static_cast<unsigned char>(b[off + 1]) << 8);
}

void PutU32(std::string &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void PutU16(std::string &out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}

}  // namespace

Waveform LoadWav(std::string_view bytes) {
  if (bytes.size() < 12 || bytes.substr(0, 4) != "RIFF" ||
      bytes.substr(8, 4) != "WAVE") {
    throw FormatError("not a RIFF/WAVE file");
  }
  bool have_fmt = false;
  Waveform w;
  std::size_t off = 12;
  while (true) {
    if (off + 8 > bytes.size()) {
      throw FormatError(have_fmt ? "missing data chunk" : "missing fmt chunk");
    }
    const std::string_view id = bytes.substr(off, 4);
    const std::uint32_t size = ReadU32(bytes, off + 4);
    const std::size_t body = off + 8;
    if (id == "fmt ") {
      if (size < 16 || body + size > bytes.size()) {
        throw FormatError("truncated fmt chunk");
      }
      const std::uint16_t format = ReadU16(bytes, body);
      const std::uint16_t channels = ReadU16(bytes, body + 2);
      const std::uint32_t rate = ReadU32(bytes, body + 4);
      const std::uint16_t bits = ReadU16(bytes, body + 14);
      if (format != 1) {
        throw FormatError("unsupported codec: format tag " +
                          std::to_string(format) + " is not PCM");
      }
      if (channels != 1) {
        throw FormatError("unsupported channel count " +
                          std::to_string(channels) + ": only mono is accepted");
      }
      if (bits != 16) {
        throw FormatError("unsupported sample width " + std::to_string(bits) +
                          " bits: only 16-bit PCM is accepted");
      }
      if (rate == 0) throw FormatError("sample rate is zero");
      w.sample_rate_hz = static_cast<int>(rate);
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw FormatError("data chunk precedes fmt chunk");
      if (body + size > bytes.size()) throw FormatError("truncated data chunk");
      if (size % 2 != 0) throw FormatError("data chunk has odd byte count");
      w.samples.resize(size / 2);
      for (std::size_t i = 0; i < w.samples.size(); ++i) {
        const auto raw = static_cast<std::int16_t>(ReadU16(bytes, body + 2 * i));
        w.samples[i] = raw / 32768.0;
      }
      return w;
    }
    // Chunks are padded to even length.
    off = body + size + (size & 1);
  }
}

std::string SerializeWav(const Waveform &w) {
  if (w.sample_rate_hz <= 0) throw ArgumentError("sample rate must be positive");
  const auto data_bytes = static_cast<std::uint32_t>(w.samples.size() * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  PutU32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  PutU32(out, 16);
  PutU16(out, 1);
  PutU16(out, 1);
  PutU32(out, static_cast<std::uint32_t>(w.sample_rate_hz));
  PutU32(out, static_cast<std::uint32_t>(w.sample_rate_hz) * 2);
  PutU16(out, 2);
  PutU16(out, 16);
  out += "data";
  PutU32(out, data_bytes);
  for (double x : w.samples) {
    const double scaled = std::round(x * 32768.0);
    const auto v = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
    PutU16(out, static_cast<std::uint16_t>(v));
  }
  return out;
}

Waveform ResampleLinear(const Waveform &w, int target_hz) {
  if (target_hz <= 0) throw ArgumentError("target sample rate must be positive");
  if (w.samples.empty()) throw ArgumentError("cannot resample an empty waveform");
  if (target_hz == w.sample_rate_hz) return w;

  const auto len = static_cast<std::uint64_t>(w.samples.size());
  const auto src = static_cast<std::uint64_t>(w.sample_rate_hz);
  const auto dst = static_cast<std::uint64_t>(target_hz);
  const std::uint64_t out_len = (2 * len * dst + src) / (2 * src);

  Waveform out;
  out.sample_rate_hz = target_hz;
  out.samples.resize(out_len);
  for (std::uint64_t i = 0; i < out_len; ++i) {
    // Integer position keeps the grid exact for long clips.
    const std::uint64_t num = i * src;
    const std::uint64_t idx = num / dst;
    const double frac = static_cast<double>(num % dst) / static_cast<double>(dst);
    if (idx + 1 >= len) {
      out.samples[i] = w.samples[len - 1];
    } else {
      out.samples[i] = w.samples[idx] + frac * (w.samples[idx + 1] - w.samples[idx]);
    }
  }
  return out;
}

Waveform TrimSilence(const Waveform &w, double divisor) {
  if (!(divisor > 0.0)) throw ArgumentError("divisor must be positive");
  if (w.samples.empty()) throw ArgumentError("cannot trim an empty waveform");
  double peak = 0.0;
  for (double x : w.samples) peak = std::max(peak, std::abs(x));
  if (peak == 0.0) {
    throw ArgumentError("waveform is silent: no sample exceeds the trim threshold");
  }
  const double threshold = peak / divisor;
  const auto keep = [threshold](double x) { return std::abs(x) >= threshold; };
  const auto first = std::find_if(w.samples.begin(), w.samples.end(), keep);
  const auto last = std::find_if(w.samples.rbegin(), w.samples.rend(), keep).base();
  Waveform out;
  out.sample_rate_hz = w.sample_rate_hz;
  out.samples.assign(first, last);
  return out;
}

bool DurationOk(const Waveform &w, double min_s, double max_s) {
  // Compare len against rate * bound to keep the inclusive edges exact.
  const auto len = static_cast<double>(w.samples.size());
  const auto rate = static_cast<double>(w.sample_rate_hz);
  return len >= min_s * rate && len <= max_s * rate;
}

}  // namespace bnasr
