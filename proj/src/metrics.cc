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

#include "bnasr/metrics.h"

#include <charconv>
#include <unordered_set>

#include "bnasr/error.h"
#include "bnasr/parallel.h"
#include "bnasr/utf8.h"

namespace bnasr {

namespace {

std::u32string CollapsedChars(std::string_view s) {
  std::string joined;
  for (const auto &w : SplitWhitespace(s)) {
    if (!joined.empty()) joined += ' ';
    joined += w;
  }
  return Utf8Decode(joined);
}

std::string FormatReal(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 6);
  return std::string(buf, ptr);
}

}  // namespace

std::size_t Levenshtein(std::string_view a, std::string_view b) {
  const auto ua = Utf8Decode(a);
  const auto ub = Utf8Decode(b);
  return EditDistance<char32_t>(ua, ub);
}

ErrorCount WordErrors(std::string_view ref, std::string_view hyp) {
  const auto r = SplitWhitespace(ref);
  const auto h = SplitWhitespace(hyp);
  if (r.empty()) throw ArgumentError("reference has no words");
  return {EditDistance<std::string>(r, h), r.size()};
}

double Wer(std::string_view ref, std::string_view hyp) {
  return WordErrors(ref, hyp).rate();
}

ErrorCount CharErrors(std::string_view ref, std::string_view hyp) {
  const auto r = CollapsedChars(ref);
  const auto h = CollapsedChars(hyp);
  if (r.empty()) throw ArgumentError("reference is empty");
  return {EditDistance<char32_t>(r, h), r.size()};
}

std::vector<AlignmentStep> AlignChars(std::string_view ref, std::string_view hyp) {
  const auto r = Utf8Decode(ref);
  const auto h = Utf8Decode(hyp);
  const std::size_t n = r.size(), m = h.size();
  std::vector<std::size_t> d((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t & { return d[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      at(i, j) = std::min({at(i - 1, j - 1) + (r[i - 1] == h[j - 1] ? 0 : 1),
                           at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }
  std::vector<AlignmentStep> steps;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && at(i, j) == at(i - 1, j - 1) + (r[i - 1] == h[j - 1] ? 0 : 1)) {
      steps.push_back({r[i - 1] == h[j - 1] ? '=' : 'S', {r[i - 1]}, {h[j - 1]}});
      --i;
      --j;
    } else if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      steps.push_back({'D', {r[i - 1]}, {}});
      --i;
    } else {
      steps.push_back({'I', {}, {h[j - 1]}});
      --j;
    }
  }
  std::reverse(steps.begin(), steps.end());
  return steps;
}

EvalReport EvaluateCorpus(std::span<const EvalPair> pairs, int workers) {
  if (pairs.empty()) throw ArgumentError("no utterances to evaluate");
  std::unordered_set<std::string> ids;
  for (const auto &p : pairs) {
    if (!ids.insert(p.clip_id).second) {
      throw ArgumentError("duplicate clip_id \"" + p.clip_id + "\"");
    }
  }
  EvalReport report;
  report.per_utterance.resize(pairs.size());
  ParallelFor(pairs.size(), workers, [&](std::size_t i) {
    const auto &p = pairs[i];
    auto &u = report.per_utterance[i];
    u.clip_id = p.clip_id;
    try {
      u.levenshtein = Levenshtein(p.ref, p.hyp);
      u.words = WordErrors(p.ref, p.hyp);
      u.chars = CharErrors(p.ref, p.hyp);
    } catch (const ArgumentError &e) {
      throw ArgumentError("clip \"" + p.clip_id + "\": " + e.what());
    }
  });
  // Sequential reduction keeps the sums independent of worker count.
  double lev_sum = 0.0;
  for (const auto &u : report.per_utterance) {
    lev_sum += static_cast<double>(u.levenshtein);
    report.corpus_words.edits += u.words.edits;
    report.corpus_words.reference_length += u.words.reference_length;
    report.corpus_chars.edits += u.chars.edits;
    report.corpus_chars.reference_length += u.chars.reference_length;
  }
  report.mean_levenshtein = lev_sum / static_cast<double>(pairs.size());
  return report;
}

std::string EvalReport::SerializeTsv() const {
  std::string out = "clip_id\tlevenshtein\twer\tcer\tword_edits\tref_words\tchar_edits\tref_chars\n";
  for (const auto &u : per_utterance) {
    out += u.clip_id + '\t' + std::to_string(u.levenshtein) + '\t' +
           FormatReal(u.words.rate()) + '\t' + FormatReal(u.chars.rate()) + '\t' +
           std::to_string(u.words.edits) + '\t' +
           std::to_string(u.words.reference_length) + '\t' +
           std::to_string(u.chars.edits) + '\t' +
           std::to_string(u.chars.reference_length) + '\n';
  }
  return out;
}

std::string EvalReport::SummaryLine() const {
  return "mean_lev=" + FormatReal(mean_levenshtein) + " wer=" + FormatReal(corpus_wer()) +
         " cer=" + FormatReal(corpus_cer());
}

}  // namespace bnasr
