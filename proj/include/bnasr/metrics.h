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

#ifndef BNASR_METRICS_H_
#define BNASR_METRICS_H_

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bnasr {

// Unit-cost edit distance between two token sequences, two-row DP.
template <typename T>
std::size_t EditDistance(std::span<const T> a, std::span<const T> b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// Character-level distance over Unicode scalars.
std::size_t Levenshtein(std::string_view a, std::string_view b);

struct ErrorCount {
  std::size_t edits = 0;
  std::size_t reference_length = 0;
  double rate() const {
    return static_cast<double>(edits) / static_cast<double>(reference_length);
  }
};

// Word edits against the whitespace-split reference. Throws ArgumentError
// when the reference has no words.
ErrorCount WordErrors(std::string_view ref, std::string_view hyp);
double Wer(std::string_view ref, std::string_view hyp);

// Code point edits against the reference with whitespace runs collapsed.
// Throws ArgumentError when the reference is empty.
ErrorCount CharErrors(std::string_view ref, std::string_view hyp);

// Full edit script, for the debug alignment mode. Ops: '=' match,
// 'S' substitution, 'D' deletion from ref, 'I' insertion of hyp.
struct AlignmentStep {
  char op;
  std::u32string ref;
  std::u32string hyp;
};
std::vector<AlignmentStep> AlignChars(std::string_view ref, std::string_view hyp);

struct UtteranceScore {
  std::string clip_id;
  std::size_t levenshtein = 0;
  ErrorCount words;
  ErrorCount chars;
};

struct EvalReport {
  std::vector<UtteranceScore> per_utterance;
  double mean_levenshtein = 0.0;
  ErrorCount corpus_words;  // micro-averaged
  ErrorCount corpus_chars;

  double corpus_wer() const { return corpus_words.rate(); }
  double corpus_cer() const { return corpus_chars.rate(); }

  std::string SerializeTsv() const;
  std::string SummaryLine() const;
};

struct EvalPair {
  std::string clip_id;
  std::string ref;
  std::string hyp;
};

// Per-utterance metrics in input order plus micro-averaged aggregates.
// Throws ArgumentError on duplicate ids, an empty input, or a reference
// without words.
EvalReport EvaluateCorpus(std::span<const EvalPair> pairs, int workers = 1);

}  // namespace bnasr

#endif  // BNASR_METRICS_H_
