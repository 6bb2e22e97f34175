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

#ifndef BNASR_CTC_H_
#define BNASR_CTC_H_

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bnasr {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) without overflow; either side may be kLogZero.
inline double LogAdd(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

double LogSumExp(std::span<const double> xs);

// T x V per-frame scores, row-major. T >= 1, V >= 2, all entries finite.
class LogitMatrix {
 public:
  LogitMatrix(int frames, int vocab_size);
  LogitMatrix(int frames, int vocab_size, std::vector<double> values);

  int frames() const { return frames_; }
  int vocab_size() const { return vocab_size_; }

  std::span<const double> row(int t) const {
    return {values_.data() + static_cast<std::size_t>(t) * vocab_size_,
            static_cast<std::size_t>(vocab_size_)};
  }
  std::span<double> row(int t) {
    return {values_.data() + static_cast<std::size_t>(t) * vocab_size_,
            static_cast<std::size_t>(vocab_size_)};
  }
  double operator()(int t, int k) const {
    return values_[static_cast<std::size_t>(t) * vocab_size_ + k];
  }
  double &operator()(int t, int k) {
    return values_[static_cast<std::size_t>(t) * vocab_size_ + k];
  }
  const std::vector<double> &values() const { return values_; }

 private:
  int frames_;
  int vocab_size_;
  std::vector<double> values_;
};

using LabelSequence = std::vector<int>;

// Merges consecutive duplicates, then removes blanks.
LabelSequence Collapse(std::span<const int> path, int blank_id);

LogitMatrix LogSoftmaxRows(const LogitMatrix &m);

// Minimum frame count that can emit `labels`: L plus adjacent repeats.
int MinFramesRequired(std::span<const int> labels);

struct CtcLossResult {
  double loss = 0.0;  // -ln P(labels | softmax(logits)); +inf when infeasible
  bool feasible = true;
  int extended_length = 0;   // 2L + 1
  std::vector<double> alpha;  // extended_length x T, log domain, row-major

  double alpha_at(int s, int t, int frames) const {
    return alpha[static_cast<std::size_t>(s) * frames + t];
  }
};

// Exact CTC negative log-likelihood via the forward recursion in log space.
// Labels must lie in [0, V) and exclude blank (ArgumentError otherwise).
// An instance with too few frames returns loss = +inf and feasible = false.
CtcLossResult CtcLoss(const LogitMatrix &logits, std::span<const int> labels,
                      int blank_id);

// d loss / d logits = softmax(logits) - gamma, where gamma is the per-frame
// label posterior from forward-backward. Throws ArgumentError when the
// instance is infeasible.
LogitMatrix CtcGrad(const LogitMatrix &logits, std::span<const int> labels,
                    int blank_id);

// Loss and gradient from a single forward-backward pass.
struct CtcLossAndGrad {
  double loss;
  LogitMatrix grad;
};
CtcLossAndGrad CtcLossWithGrad(const LogitMatrix &logits,
                               std::span<const int> labels, int blank_id);

// Per-frame argmax (lowest id wins ties), then Collapse.
LabelSequence GreedyDecode(const LogitMatrix &logits, int blank_id);

// Binary interchange format: "CTCL", u32 version = 1, u32 T, u32 V, then
// T * V little-endian float32 values, row-major.
std::string SerializeLogits(const LogitMatrix &m);
LogitMatrix ParseLogits(std::string_view bytes);

}  // namespace bnasr

#endif  // BNASR_CTC_H_
