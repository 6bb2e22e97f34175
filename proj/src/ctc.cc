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

#include "bnasr/ctc.h"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>

#include "bnasr/error.h"

namespace bnasr {

double LogSumExp(std::span<const double> xs) {
  double hi = kLogZero;
  for (double x : xs) hi = std::max(hi, x);
  if (hi == kLogZero) return kLogZero;
  if (std::isinf(hi)) return hi;
  double sum = 0.0;
  for (double x : xs) sum += std::exp(x - hi);
  return hi + std::log(sum);
}

LogitMatrix::LogitMatrix(int frames, int vocab_size)
    : LogitMatrix(frames, vocab_size,
                  std::vector<double>(static_cast<std::size_t>(std::max(frames, 0)) *
                                      static_cast<std::size_t>(std::max(vocab_size, 0)))) {}

LogitMatrix::LogitMatrix(int frames, int vocab_size, std::vector<double> values)
    : frames_(frames), vocab_size_(vocab_size), values_(std::move(values)) {
  if (frames < 1) throw ArgumentError("logit matrix needs at least one frame");
  if (vocab_size < 2) throw ArgumentError("logit matrix needs V >= 2");
  if (values_.size() != static_cast<std::size_t>(frames) * vocab_size) {
    throw ArgumentError("logit matrix size does not match T x V");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw ArgumentError("logit matrix entry " + std::to_string(i) +
                          " is not finite");
    }
  }
}

LabelSequence Collapse(std::span<const int> path, int blank_id) {
  LabelSequence out;
  int prev = -1;
  for (int id : path) {
    if (id != prev && id != blank_id) out.push_back(id);
    prev = id;
  }
  return out;
}

LogitMatrix LogSoftmaxRows(const LogitMatrix &m) {
  LogitMatrix out = m;
  for (int t = 0; t < m.frames(); ++t) {
    const double norm = LogSumExp(m.row(t));
    for (double &x : out.row(t)) x -= norm;
  }
  return out;
}

int MinFramesRequired(std::span<const int> labels) {
  int n = static_cast<int>(labels.size());
  for (std::size_t i = 1; i < labels.size(); ++i) {
    if (labels[i] == labels[i - 1]) ++n;
  }
  return n;
}

namespace {

void CheckLabels(const LogitMatrix &logits, std::span<const int> labels,
                 int blank_id) {
  if (blank_id < 0 || blank_id >= logits.vocab_size()) {
    throw ArgumentError("blank id outside [0, V)");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= logits.vocab_size()) {
      throw ArgumentError("label " + std::to_string(i) + " outside [0, V)");
    }
    if (labels[i] == blank_id) {
      throw ArgumentError("label sequence contains the blank id at position " +
                          std::to_string(i));
    }
  }
}

// Blank-interleaved labels: b y0 b y1 ... b.
std::vector<int> Extend(std::span<const int> labels, int blank_id) {
  std::vector<int> ext(2 * labels.size() + 1, blank_id);
  for (std::size_t i = 0; i < labels.size(); ++i) ext[2 * i + 1] = labels[i];
  return ext;
}

bool CanSkip(const std::vector<int> &ext, int s, int blank_id) {
  return s >= 2 && ext[s] != blank_id && ext[s] != ext[s - 2];
}

std::vector<double> Forward(const LogitMatrix &lp, const std::vector<int> &ext,
                            int blank_id) {
  const int frames = lp.frames();
  const int S = static_cast<int>(ext.size());
  std::vector<double> alpha(static_cast<std::size_t>(S) * frames, kLogZero);
  auto at = [&](int s, int t) -> double & {
    return alpha[static_cast<std::size_t>(s) * frames + t];
  };
  at(0, 0) = lp(0, ext[0]);
  if (S > 1) at(1, 0) = lp(0, ext[1]);
  for (int t = 1; t < frames; ++t) {
    for (int s = 0; s < S; ++s) {
      double acc = at(s, t - 1);
      if (s >= 1) acc = LogAdd(acc, at(s - 1, t - 1));
      if (CanSkip(ext, s, blank_id)) acc = LogAdd(acc, at(s - 2, t - 1));
      at(s, t) = acc == kLogZero ? kLogZero : acc + lp(t, ext[s]);
    }
  }
  return alpha;
}

// beta(s, t): log probability of emitting the rest of the sequence from
// frames t+1.. given state s at frame t (emission at t excluded).
std::vector<double> Backward(const LogitMatrix &lp, const std::vector<int> &ext,
                             int blank_id) {
  const int frames = lp.frames();
  const int S = static_cast<int>(ext.size());
  std::vector<double> beta(static_cast<std::size_t>(S) * frames, kLogZero);
  auto at = [&](int s, int t) -> double & {
    return beta[static_cast<std::size_t>(s) * frames + t];
  };
  at(S - 1, frames - 1) = 0.0;
  if (S > 1) at(S - 2, frames - 1) = 0.0;
  for (int t = frames - 2; t >= 0; --t) {
    for (int s = 0; s < S; ++s) {
      double acc = at(s, t + 1) + lp(t + 1, ext[s]);
      if (s + 1 < S) acc = LogAdd(acc, at(s + 1, t + 1) + lp(t + 1, ext[s + 1]));
      if (s + 2 < S && CanSkip(ext, s + 2, blank_id)) {
        acc = LogAdd(acc, at(s + 2, t + 1) + lp(t + 1, ext[s + 2]));
      }
      at(s, t) = acc;
    }
  }
  return beta;
}

double TerminalLogProb(const std::vector<double> &alpha, int S, int frames) {
  double p = alpha[static_cast<std::size_t>(S - 1) * frames + frames - 1];
  if (S > 1) p = LogAdd(p, alpha[static_cast<std::size_t>(S - 2) * frames + frames - 1]);
  return p;
}

}  // namespace

CtcLossResult CtcLoss(const LogitMatrix &logits, std::span<const int> labels,
                      int blank_id) {
  CheckLabels(logits, labels, blank_id);
  const auto ext = Extend(labels, blank_id);
  CtcLossResult r;
  r.extended_length = static_cast<int>(ext.size());
  if (MinFramesRequired(labels) > logits.frames()) {
    r.feasible = false;
    r.loss = std::numeric_limits<double>::infinity();
    r.alpha.assign(ext.size() * static_cast<std::size_t>(logits.frames()), kLogZero);
    return r;
  }
  const LogitMatrix lp = LogSoftmaxRows(logits);
  r.alpha = Forward(lp, ext, blank_id);
  r.loss = -TerminalLogProb(r.alpha, r.extended_length, logits.frames());
  return r;
}

CtcLossAndGrad CtcLossWithGrad(const LogitMatrix &logits,
                               std::span<const int> labels, int blank_id) {
  CheckLabels(logits, labels, blank_id);
  if (MinFramesRequired(labels) > logits.frames()) {
    throw ArgumentError("CTC instance is infeasible: " +
                        std::to_string(logits.frames()) + " frames, needs " +
                        std::to_string(MinFramesRequired(labels)));
  }
  const int frames = logits.frames();
  const int V = logits.vocab_size();
  const auto ext = Extend(labels, blank_id);
  const int S = static_cast<int>(ext.size());
  const LogitMatrix lp = LogSoftmaxRows(logits);
  const auto alpha = Forward(lp, ext, blank_id);
  const auto beta = Backward(lp, ext, blank_id);
  const double log_p = TerminalLogProb(alpha, S, frames);

  LogitMatrix grad(frames, V);
  std::vector<double> occupancy(static_cast<std::size_t>(V));
  for (int t = 0; t < frames; ++t) {
    std::fill(occupancy.begin(), occupancy.end(), kLogZero);
    for (int s = 0; s < S; ++s) {
      const double a = alpha[static_cast<std::size_t>(s) * frames + t];
      const double b = beta[static_cast<std::size_t>(s) * frames + t];
      if (a == kLogZero || b == kLogZero) continue;
      occupancy[ext[s]] = LogAdd(occupancy[ext[s]], a + b);
    }
    for (int k = 0; k < V; ++k) {
      const double posterior =
          occupancy[k] == kLogZero ? 0.0 : std::exp(occupancy[k] - log_p);
      grad(t, k) = std::exp(lp(t, k)) - posterior;
    }
  }
  return {-log_p, std::move(grad)};
}

LogitMatrix CtcGrad(const LogitMatrix &logits, std::span<const int> labels,
                    int blank_id) {
  return CtcLossWithGrad(logits, labels, blank_id).grad;
}

LabelSequence GreedyDecode(const LogitMatrix &logits, int blank_id) {
  std::vector<int> path(static_cast<std::size_t>(logits.frames()));
  for (int t = 0; t < logits.frames(); ++t) {
    auto row = logits.row(t);
    // max_element returns the first maximum, i.e. the lowest id.
    path[t] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return Collapse(path, blank_id);
}

namespace {

void PutU32(std::string &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t GetU32(std::string_view b, std::size_t off) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) {
    v = (v << 8) | static_cast<unsigned char>(b[off + i]);
  }
  return v;
}

}  // namespace

std::string SerializeLogits(const LogitMatrix &m) {
  std::string out = "CTCL";
  PutU32(out, 1);
  PutU32(out, static_cast<std::uint32_t>(m.frames()));
  PutU32(out, static_cast<std::uint32_t>(m.vocab_size()));
  out.reserve(out.size() + m.values().size() * 4);
  for (double x : m.values()) {
    PutU32(out, std::bit_cast<std::uint32_t>(static_cast<float>(x)));
  }
  return out;
}

LogitMatrix ParseLogits(std::string_view bytes) {
  if (bytes.size() < 16 || bytes.substr(0, 4) != "CTCL") {
    throw FormatError("not a CTCL logit file");
  }
  const std::uint32_t version = GetU32(bytes, 4);
  if (version != 1) {
    throw FormatError("unsupported CTCL version " + std::to_string(version));
  }
  const std::uint32_t frames = GetU32(bytes, 8);
  const std::uint32_t vocab = GetU32(bytes, 12);
  const std::uint64_t count = static_cast<std::uint64_t>(frames) * vocab;
  if (bytes.size() != 16 + count * 4) {
    throw FormatError("CTCL payload size does not match header T x V");
  }
  std::vector<double> values(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    values[i] = std::bit_cast<float>(GetU32(bytes, 16 + 4 * i));
  }
  try {
    return LogitMatrix(static_cast<int>(frames), static_cast<int>(vocab),
                       std::move(values));
  } catch (const ArgumentError &e) {
    throw FormatError(std::string("invalid CTCL contents: ") + e.what());
  }
}

}  // namespace bnasr
